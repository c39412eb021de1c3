//! Shared test oracles, independent of the library's solver path.
#![allow(dead_code)] // each test binary uses its own subset

use panelflow::geometry::{naca4_params, Airfoil, Panel, Point2, Spacing};
use panelflow::panel::{influence, FlowCondition};
use panelflow::pipeline::{Problem, Workload};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 15-point Kronrod abscissae (positive half).
const XK: [f64; 8] = [
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
];
const WK: [f64; 8] = [
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
];
/// Embedded 7-point Gauss weights (for XK indices 0, 2, 4, 6).
const WG: [f64; 4] = [
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for i in 0..8 {
        let (fp, fm) = (f(c + h * XK[i]), f(c - h * XK[i]));
        let pair = if i == 0 { fp } else { fp + fm };
        kronrod += WK[i] * pair;
        if i % 2 == 0 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, (kronrod - gauss) * h)
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    // Local acceptance: the absolute floor covers the shrinking contributions
    // near an endpoint singularity, the relative part the smooth regions.
    if err.abs() <= 1e-15 + 1e-12 * value.abs() || depth >= 48 {
        return value;
    }
    let c = 0.5 * (a + b);
    adaptive(f, a, c, depth + 1) + adaptive(f, c, b, depth + 1)
}

/// Adaptive Gauss-Kronrod quadrature of the stream-function kernel
/// `-(1/2π) ∫ log|x - s| ds` along a panel. The interval is split at the
/// projection of `x` onto the panel line so an (integrable) interior
/// singularity only ever sits at subinterval endpoints, which the open
/// Gauss-Kronrod rule never evaluates.
pub fn influence_quadrature(x: Point2<f64>, panel: &Panel<f64>) -> f64 {
    let len = panel.len;
    let f = |t: f64| {
        let s = Point2::new(
            panel.a.x + t * panel.h.x,
            panel.a.y + t * panel.h.y,
        );
        -(1.0 / (2.0 * std::f64::consts::PI)) * (x - s).norm().ln() * len
    };
    let t_proj = ((x - panel.a).dot(panel.h) / (len * len)).clamp(0.0, 1.0);
    if t_proj > 0.0 && t_proj < 1.0 {
        adaptive(&f, 0.0, t_proj, 0) + adaptive(&f, t_proj, 1.0, 0)
    } else {
        adaptive(&f, 0.0, 1.0, 0)
    }
}

/// Direct-summation collocation oracle: the (n+1)×(n+1) system with every
/// vortex strength kept and an explicit trailing-edge row, no elimination.
pub struct FullSystem {
    pub m: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

pub fn assemble_full_oracle(airfoil: &Airfoil<f64>, flow: &FlowCondition<f64>) -> FullSystem {
    let panels = airfoil.panels();
    let n = panels.len();
    let mut m = vec![vec![0.0; n + 1]; n + 1];
    let mut rhs = vec![0.0; n + 1];
    for j in 0..n {
        for (i, p) in panels.iter().enumerate() {
            m[j][i] = influence(panels[j].mid, p).unwrap();
        }
        m[j][n] = 1.0;
        rhs[j] = flow.stream(panels[j].mid);
    }
    // Explicit trailing-edge closure row: γ_0 + γ_{n-1} = 0.
    m[n][0] = 1.0;
    m[n][n - 1] = 1.0;
    rhs[n] = 0.0;
    FullSystem { m, rhs }
}

impl FullSystem {
    /// Eliminates γ_{n-1} = -γ_0, producing the reduced n×n matrix and rhs
    /// over the unknowns [γ_0, …, γ_{n-2}, C].
    pub fn eliminate(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let n = self.rhs.len() - 1;
        let mut a = vec![vec![0.0; n]; n];
        let mut b = vec![0.0; n];
        for j in 0..n {
            a[j][0] = self.m[j][0] - self.m[j][n - 1];
            a[j][1..=n - 2].copy_from_slice(&self.m[j][1..=n - 2]);
            a[j][n - 1] = self.m[j][n];
            b[j] = self.rhs[j];
        }
        (a, b)
    }
}

/// Seeded batch of jittered NACA sections for pipeline tests.
pub fn seeded_workload(m: usize, n: usize, seed: u64) -> Workload<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problems = (0..m)
        .map(|i| {
            let camber = rng.random_range(0.0..0.03);
            let pos = rng.random_range(0.3..0.5);
            let thickness = rng.random_range(0.10..0.14);
            let alpha = rng.random_range(-0.03..0.03);
            let airfoil = naca4_params(
                camber,
                pos,
                thickness,
                n,
                Spacing::Cosine,
                format!("jitter-{i}"),
            )
            .expect("jittered parameters stay valid");
            Problem {
                airfoil,
                flow: FlowCondition::new(1.0, alpha).unwrap(),
                reynolds: 1e6,
            }
        })
        .collect();
    Workload::new(problems).unwrap()
}

/// Random panel plus a field point at a controlled distance range, seeded.
pub fn random_panel_and_point(
    rng: &mut ChaCha8Rng,
    min_dist_factor: f64,
) -> (Panel<f64>, Point2<f64>) {
    let a = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let mut b = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    while (b - a).norm() < 1e-3 {
        b = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let h = b - a;
    let panel = Panel {
        a,
        b,
        h,
        h_perp: h.perp(),
        mid: Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y)),
        len: h.norm(),
    };
    loop {
        let x = Point2::new(
            rng.random_range(-3.0_f64..3.0),
            rng.random_range(-3.0_f64..3.0),
        );
        // Distance from x to the segment.
        let t = ((x - a).dot(h) / (panel.len * panel.len)).clamp(0.0_f64, 1.0);
        let closest = Point2::new(a.x + t * h.x, a.y + t * h.y);
        if (x - closest).norm() >= min_dist_factor * panel.len {
            return (panel, x);
        }
    }
}
