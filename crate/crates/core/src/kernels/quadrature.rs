use crate::{Error, Result, Vec3};

pub const DEFAULT_MAX_DEPTH: u32 = 20;

// Symmetric 7-point rule exact for degree 5 (Radon), barycentric form.
const SQRT15: f64 = 3.872_983_346_207_417;
const A1: f64 = (6.0 - SQRT15) / 21.0;
const B1: f64 = (9.0 + 2.0 * SQRT15) / 21.0;
const A2: f64 = (6.0 + SQRT15) / 21.0;
const B2: f64 = (9.0 - 2.0 * SQRT15) / 21.0;
const W0: f64 = 9.0 / 40.0;
const W1: f64 = (155.0 - SQRT15) / 1200.0;
const W2: f64 = (155.0 + SQRT15) / 1200.0;

const RULE: [([f64; 3], f64); 7] = [
    ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], W0),
    ([A1, A1, B1], W1),
    ([A1, B1, A1], W1),
    ([B1, A1, A1], W1),
    ([A2, A2, B2], W2),
    ([A2, B2, A2], W2),
    ([B2, A2, A2], W2),
];

fn area(t: &[Vec3; 3]) -> f64 {
    0.5 * (t[1] - t[0]).cross(t[2] - t[0]).norm()
}

fn rule<F: Fn(Vec3) -> f64>(f: &F, t: &[Vec3; 3]) -> f64 {
    let s: f64 = RULE
        .iter()
        .map(|&([l0, l1, l2], w)| w * f(t[0] * l0 + t[1] * l1 + t[2] * l2))
        .sum();
    s * area(t)
}

fn split(t: &[Vec3; 3]) -> [[Vec3; 3]; 4] {
    let [a, b, c] = *t;
    let ab = (a + b) * 0.5;
    let bc = (b + c) * 0.5;
    let ca = (c + a) * 0.5;
    [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
}

/// Adaptive integration of `f` over a triangle.
///
/// Each triangle is integrated with the 7-point degree-5 rule and compared
/// with the sum over its four midpoint children; the children are accepted
/// once the two agree to `rel_tol`, otherwise each child recurses. Reaching
/// `max_depth` yields [`Error::AccuracyNotReached`] with the best estimate.
pub fn adaptive_triangle_quadrature<F: Fn(Vec3) -> f64>(
    f: F,
    triangle: [Vec3; 3],
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let whole = rule(&f, &triangle);
    let mut converged = true;
    let est = refine(&f, &triangle, whole, rel_tol, 0, max_depth, &mut converged);
    if converged {
        Ok(est)
    } else {
        Err(Error::AccuracyNotReached { estimate: est, rel_tol })
    }
}

fn refine<F: Fn(Vec3) -> f64>(
    f: &F,
    t: &[Vec3; 3],
    parent: f64,
    rel_tol: f64,
    depth: u32,
    max_depth: u32,
    converged: &mut bool,
) -> f64 {
    let kids = split(t);
    let parts = kids.map(|k| rule(f, &k));
    let sum: f64 = parts.iter().sum();
    if (sum - parent).abs() <= rel_tol * sum.abs() {
        return sum;
    }
    if depth + 1 >= max_depth {
        *converged = false;
        return sum;
    }
    kids.iter()
        .zip(parts)
        .map(|(k, p)| refine(f, k, p, rel_tol, depth + 1, max_depth, converged))
        .sum()
}
