//! Selig-style `.dat` airfoil coordinate files.
//!
//! Layout: a name line, then one `x y` pair per line starting at the trailing
//! edge, looping over the upper surface, the leading edge, and the lower
//! surface back to the trailing edge. The final closure duplicate may be
//! written imprecisely (or rounded); it is normalized to an exact repeat of
//! the first point on read.

use super::{Airfoil, Point2};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const CLOSURE_TOL: f64 = 1e-6;

/// Formats with 9 significant digits, fixed notation for coordinate-sized
/// magnitudes. Parsing and re-printing the result is byte-stable.
pub(crate) fn fmt_sig9(v: f64) -> String {
    fn render(v: f64, exp: i32) -> String {
        if (-9..=3).contains(&exp) {
            let decimals = (8 - exp).max(0) as usize;
            format!("{v:.decimals$}")
        } else {
            format!("{v:.8e}")
        }
    }
    if v == 0.0 {
        return "0.00000000".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let s = render(v, exp);
    // Rounding at 9 significant digits may cross a power of ten; reformat
    // with the printed value's exponent so parse -> print is a fixed point.
    let printed: f64 = s.parse().unwrap();
    let exp2 = if printed == 0.0 {
        exp
    } else {
        printed.abs().log10().floor() as i32
    };
    if exp2 != exp {
        render(printed, exp2)
    } else {
        s
    }
}

/// Serializes an airfoil, closure point included.
pub fn write_dat<T: Scalar>(airfoil: &Airfoil<T>) -> String {
    let mut out = String::with_capacity(32 * airfoil.points().len());
    out.push_str(airfoil.name());
    out.push('\n');
    for p in airfoil.points() {
        out.push_str(&fmt_sig9(p.x.as_f64()));
        out.push(' ');
        out.push_str(&fmt_sig9(p.y.as_f64()));
        out.push('\n');
    }
    out
}

/// Parses a `.dat` file into a validated airfoil.
pub fn read_dat<T: Scalar>(text: &str) -> Result<Airfoil<T>> {
    let mut lines = text.lines();
    let name = lines
        .next()
        .ok_or_else(|| Error::MalformedFile("empty file".into()))?
        .trim()
        .to_string();
    if name.is_empty() {
        return Err(Error::MalformedFile("missing name line".into()));
    }

    let mut points: Vec<Point2<T>> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (xs, ys) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(x), Some(y), None) => (x, y),
            _ => {
                return Err(Error::MalformedFile(format!(
                    "line {}: expected exactly two coordinates",
                    lineno + 2
                )))
            }
        };
        let parse = |s: &str| -> Result<T> {
            s.parse::<f64>()
                .map(T::of)
                .map_err(|_| {
                    Error::MalformedFile(format!("line {}: non-numeric token {s:?}", lineno + 2))
                })
        };
        points.push(Point2::new(parse(xs)?, parse(ys)?));
    }

    if points.len() < 5 {
        return Err(Error::MalformedFile(format!(
            "need at least 5 points, got {}",
            points.len()
        )));
    }

    let first = points[0];
    let last = *points.last().unwrap();
    if first != last {
        if last.dist(first).as_f64() <= CLOSURE_TOL {
            // Imprecisely repeated trailing edge: snap to an exact closure.
            *points.last_mut().unwrap() = first;
        } else {
            return Err(Error::MalformedFile(format!(
                "open contour: endpoints differ by more than {CLOSURE_TOL}"
            )));
        }
    }

    Airfoil::new(points, name).map_err(|e| match e {
        Error::InvalidGeometry(why) => Error::MalformedFile(why),
        other => other,
    })
}
