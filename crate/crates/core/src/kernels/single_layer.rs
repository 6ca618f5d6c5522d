use super::{adaptive_triangle_quadrature, FlopLedger, Ops, Panel, FOUR_PI};
use crate::{Result, Vec3};

/// Relative (to the panel diameter) size of the near-edge zone.
const NEAR_EDGE_REL: f64 = 1e-10;

/// `∫_panel dA'/(4π|p − r'|)` for unit constant density, in closed form.
///
/// Edge decomposition: with `h` the height of `p` above the panel plane and,
/// per edge, `P0` the signed in-plane distance from the projection of `p` to
/// the edge line, `s±` the edge-aligned coordinates of the edge end points
/// and `R±` their distances from `p`,
///
/// ```text
/// ∫ dA/R = Σ P0·ln((R+ + s+)/(R- + s-))
///        − |h|·Σ [atan(P0 s+/(R0² + |h|R+)) − atan(P0 s-/(R0² + |h|R-))],
/// R0² = P0² + h².
/// ```
///
/// Valid on both sides of the plane, in the plane, and on the panel itself.
/// An edge whose line passes within `1e-10` diameters of `p` contributes
/// nothing in the limit; such evaluations are booked as near-field fallbacks.
pub fn single_layer_panel_potential(panel: &Panel, p: Vec3, ledger: &mut FlopLedger) -> f64 {
    let mut ops = Ops::default();
    let verts = panel.vertices();
    let h = (p - verts[0]).dot(panel.normal());
    let abs_h = h.abs();
    ops += Ops::new(5, 3, 0, 0, 0);

    let rel: [Vec3; 3] = verts.map(|v| v - p);
    let dist: [f64; 3] = rel.map(|r| r.norm());
    ops += Ops::new(15, 9, 0, 3, 0);

    let tiny = NEAR_EDGE_REL * panel.diameter();
    let mut log_sum = 0.0;
    let mut atan_sum = 0.0;
    let mut degenerate = false;
    for i in 0..3 {
        let j = (i + 1) % 3;
        let t = panel.edge_dirs()[i];
        let m = panel.edge_normals()[i];
        let s_minus = rel[i].dot(t);
        let s_plus = rel[j].dot(t);
        let p0 = rel[i].dot(m);
        ops += Ops::new(6, 9, 0, 0, 0);
        if p0.abs() <= tiny {
            // Edge line through (or grazing) p: both terms carry a factor P0.
            if abs_h <= tiny {
                degenerate = true;
            }
            continue;
        }
        let r0_sq = p0 * p0 + h * h;
        ops += Ops::new(1, 2, 0, 0, 0);

        // R + s loses all digits when s ≈ −R; use R0²/(R − s) there.
        let plus = if s_plus >= 0.0 {
            ops += Ops::new(1, 0, 0, 0, 0);
            dist[j] + s_plus
        } else {
            ops += Ops::new(1, 0, 1, 0, 0);
            r0_sq / (dist[j] - s_plus)
        };
        let minus = if s_minus >= 0.0 {
            ops += Ops::new(1, 0, 0, 0, 0);
            dist[i] + s_minus
        } else {
            ops += Ops::new(1, 0, 1, 0, 0);
            r0_sq / (dist[i] - s_minus)
        };
        log_sum += p0 * (plus / minus).ln();
        atan_sum +=
            (p0 * s_plus / (r0_sq + abs_h * dist[j])).atan() - (p0 * s_minus / (r0_sq + abs_h * dist[i])).atan();
        ops += Ops::new(5, 5, 3, 0, 3);
    }
    if degenerate {
        ledger.note_fallback();
    }
    ops += Ops::new(1, 1, 1, 0, 0);
    ledger.charge(ops);
    (log_sum - abs_h * atan_sum) / FOUR_PI
}

/// The same integral by adaptive quadrature; the independent check of
/// [`single_layer_panel_potential`].
pub fn single_layer_quadrature(panel: &Panel, p: Vec3, rel_tol: f64) -> Result<f64> {
    adaptive_triangle_quadrature(
        |r| 1.0 / (FOUR_PI * (r - p).norm()),
        panel.vertices(),
        rel_tol,
        super::DEFAULT_MAX_DEPTH,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn panel() -> Panel {
        Panel::new([
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.2, 0.1, 0.0),
            Vec3::new(0.3, 0.9, 0.2),
        ])
    }

    #[test]
    fn monopole_limit_far_away() {
        let p = panel();
        let mut l = FlopLedger::new();
        let dir = Vec3::new(0.3, -0.5, 0.8).normalized();
        let eval = p.centroid() + dir * (10.0 * p.diameter());
        let v = single_layer_panel_potential(&p, eval, &mut l);
        let d = eval.distance(p.centroid());
        assert_relative_eq!(v, p.area() / (FOUR_PI * d), max_relative = 1e-3);
        let very_far = p.centroid() + dir * (1e4 * p.diameter());
        let v = single_layer_panel_potential(&p, very_far, &mut l);
        let d = very_far.distance(p.centroid());
        assert_relative_eq!(v, p.area() / (FOUR_PI * d), max_relative = 1e-6);
    }

    #[test]
    fn matches_quadrature_off_plane() {
        let p = panel();
        let mut l = FlopLedger::new();
        for eval in [
            Vec3::new(0.4, 0.3, 0.7),
            Vec3::new(-0.5, 1.5, -0.3),
            Vec3::new(2.0, 2.0, 2.0),
        ] {
            let exact = single_layer_panel_potential(&p, eval, &mut l);
            let quad = single_layer_quadrature(&p, eval, 1e-13).unwrap();
            assert_relative_eq!(exact, quad, max_relative = 1e-10);
        }
    }

    #[test]
    fn continuous_across_plane() {
        let p = panel();
        let mut l = FlopLedger::new();
        let base = p.centroid() * 0.6 + p.vertices()[1] * 0.4;
        for eps in [1e-3, 1e-6, 1e-9] {
            let above = single_layer_panel_potential(&p, base + p.normal() * eps, &mut l);
            let below = single_layer_panel_potential(&p, base - p.normal() * eps, &mut l);
            assert!((above - below).abs() < 1e-8, "eps {eps}: {above} vs {below}");
        }
        let on = single_layer_panel_potential(&p, base, &mut l);
        let near = single_layer_panel_potential(&p, base + p.normal() * 1e-9, &mut l);
        assert!((on - near).abs() < 1e-8);
    }

    #[test]
    fn in_plane_outside_matches_quadrature() {
        let p = panel();
        let mut l = FlopLedger::new();
        let eval = p.vertices()[0] * 1.5 - p.centroid() * 0.5;
        let exact = single_layer_panel_potential(&p, eval, &mut l);
        let quad = single_layer_quadrature(&p, eval, 1e-12).unwrap();
        assert_relative_eq!(exact, quad, max_relative = 1e-9);
    }

    #[test]
    fn on_edge_and_vertex_are_finite_and_flagged() {
        let p = panel();
        let mut l = FlopLedger::new();
        let mid = (p.vertices()[0] + p.vertices()[1]) * 0.5;
        let on_edge = single_layer_panel_potential(&p, mid, &mut l);
        assert!(on_edge.is_finite() && on_edge > 0.0);
        assert_eq!(l.near_field_fallbacks(), 1);
        let at_vertex = single_layer_panel_potential(&p, p.vertices()[2], &mut l);
        assert!(at_vertex.is_finite() && at_vertex > 0.0);
        // Continuity into the edge from inside the panel.
        let inside = mid + (p.centroid() - mid) * 1e-9;
        let near = single_layer_panel_potential(&p, inside, &mut l);
        assert!((near - on_edge).abs() < 1e-7);
    }

    #[test]
    fn flop_count_is_deterministic() {
        let p = panel();
        let eval = Vec3::new(0.4, 0.3, 0.7);
        let mut a = FlopLedger::new();
        let mut b = FlopLedger::new();
        single_layer_panel_potential(&p, eval, &mut a);
        single_layer_panel_potential(&p, eval, &mut b);
        assert_eq!(a, b);
        assert!(a.total() > 0);
    }
}
