//! Static SVG rendering of an airfoil contour with its control points.

use panelflow::geometry::Airfoil;
use panelflow::Scalar;

const WIDTH: f64 = 960.0;
const MARGIN: f64 = 40.0;

pub fn airfoil_svg<T: Scalar>(airfoil: &Airfoil<T>) -> String {
    let pts: Vec<(f64, f64)> = airfoil
        .points()
        .iter()
        .map(|p| (p.x.as_f64(), p.y.as_f64()))
        .collect();
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    let span_x = (x_hi - x_lo).max(1e-9);
    let span_y = (y_hi - y_lo).max(0.05);
    let scale = (WIDTH - 2.0 * MARGIN) / span_x;
    let height = span_y * scale + 2.0 * MARGIN;
    // SVG y grows downward.
    let map = |x: f64, y: f64| {
        (
            MARGIN + (x - x_lo) * scale,
            height - MARGIN - (y - y_lo) * scale,
        )
    };

    let mut path = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let (px, py) = map(x, y);
        if i == 0 {
            path.push_str(&format!("M {px:.2} {py:.2}"));
        } else {
            path.push_str(&format!(" L {px:.2} {py:.2}"));
        }
    }

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {WIDTH:.0} {height:.0}\">\n"
    ));
    out.push_str(&format!(
        "  <title>{}</title>\n  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        airfoil.name()
    ));
    out.push_str(&format!(
        "  <path d=\"{path}\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.5\"/>\n"
    ));
    for panel in airfoil.panels() {
        let (cx, cy) = map(panel.mid.x.as_f64(), panel.mid.y.as_f64());
        out.push_str(&format!(
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"2\" fill=\"#c0392b\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}
