//! Fixed-order Gauss–Legendre rules, panel splitting and geometric grading.
//!
//! Every integrand in this crate is piecewise analytic: summatory functions have their
//! only breakpoints at the frequencies, and the algebraic factors `(x−u)^(μ−1)` or
//! `(t−λₙ)^k` are singular only at cell endpoints. Integration therefore happens cell by
//! cell with a fixed rule, and cells that touch a singular endpoint are split on a
//! geometric mesh (ratio 1/2) toward that endpoint.

use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫ₐᵇ f` with a single application of the rule.
    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F, a: f64, b: f64) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += *w * f(mid + half * x);
        }
        acc * half
    }

    /// Splits `[a, b]` into equal panels no wider than `max_width`.
    pub fn integrate_panels<F: FnMut(f64) -> Complex64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        max_width: f64,
    ) -> Complex64 {
        if b <= a {
            return Complex64::new(0.0, 0.0);
        }
        let panels = ((b - a) / max_width).ceil().max(1.0) as usize;
        let h = (b - a) / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..panels {
            let lo = a + j as f64 * h;
            let hi = if j + 1 == panels { b } else { lo + h };
            acc += self.integrate(&mut f, lo, hi);
        }
        acc
    }

    /// Integrates over `[a, b]` with geometric grading toward the flagged endpoints.
    ///
    /// The graded part uses intervals whose widths halve toward the endpoint until they fall
    /// below `2^-depth` of the cell; the innermost interval is integrated with the same rule.
    /// Panels outside the graded zones are no wider than `max_width`.
    pub fn integrate_graded<F: FnMut(f64) -> Complex64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        grading: Grading,
        max_width: f64,
    ) -> Complex64 {
        if b <= a {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (lo, hi) in graded_intervals(a, b, grading, max_width) {
            acc += self.integrate(&mut f, lo, hi);
        }
        acc
    }
}

/// Which endpoints of a cell carry an algebraic singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grading {
    pub left: bool,
    pub right: bool,
    pub depth: u32,
}

impl Grading {
    pub const NONE: Grading = Grading { left: false, right: false, depth: 0 };

    pub fn new(left: bool, right: bool, depth: u32) -> Self {
        Self { left, right, depth }
    }
}

/// Subintervals of `[a, b]` for the given grading, in increasing order.
pub fn graded_intervals(a: f64, b: f64, grading: Grading, max_width: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if b <= a {
        return out;
    }
    let (left_end, right_end) = match (grading.left, grading.right) {
        (false, false) => (a, b),
        (true, false) => (a + 0.5 * (b - a).min(max_width), b),
        (false, true) => (a, b - 0.5 * (b - a).min(max_width)),
        (true, true) => {
            let w = 0.5 * (b - a).min(max_width);
            let w = w.min(0.5 * (b - a));
            (a + w, b - w)
        }
    };
    let floor = 64.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
    let max_depth = |zone: f64| -> u32 {
        let d = (zone / floor).log2().floor().max(1.0) as u32;
        grading.depth.max(1).min(d)
    };
    if grading.left {
        let zone = left_end - a;
        let mut pts = vec![a];
        let depth = max_depth(zone);
        for j in (0..depth).rev() {
            pts.push(a + zone * 0.5f64.powi(j as i32));
        }
        pts.dedup();
        out.extend(pts.windows(2).map(|w| (w[0], w[1])));
    }
    if right_end > left_end {
        let panels = ((right_end - left_end) / max_width).ceil().max(1.0) as usize;
        let h = (right_end - left_end) / panels as f64;
        for j in 0..panels {
            let lo = left_end + j as f64 * h;
            let hi = if j + 1 == panels { right_end } else { lo + h };
            out.push((lo, hi));
        }
    }
    if grading.right {
        let zone = b - right_end;
        let depth = max_depth(zone);
        let mut pts = vec![right_end];
        for j in 1..depth {
            pts.push(b - zone * 0.5f64.powi(j as i32));
        }
        pts.push(b);
        pts.dedup();
        out.extend(pts.windows(2).map(|w| (w[0], w[1])));
    }
    out
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Complex64 {
        move |x| Complex64::from(f(x))
    }

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for n in [1, 2, 5, 16, 31] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}");
            for i in 0..n {
                assert!((g.nodes[i] + g.nodes[n - 1 - i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exact_for_polynomials_of_degree_2n_minus_1() {
        let g = GaussLegendre::new(6);
        let v = g.integrate(re(|x| x.powi(11) + 3.0 * x.powi(10)), 0.0, 1.0);
        assert!((v.re - (1.0 / 12.0 + 3.0 / 11.0)).abs() < 1e-14);
    }

    #[test]
    fn graded_mesh_resolves_endpoint_singularity() {
        let g = GaussLegendre::new(16);
        // ∫₀¹ (1−u)^(−1/2) du = 2
        let v = g.integrate_graded(re(|u| (1.0 - u).powf(-0.5)), 0.0, 1.0, Grading::new(false, true, 60), 1.0);
        // the floor on the innermost width leaves ~sqrt(64 eps) of mass to the last panel
        assert!((v.re - 2.0).abs() < 1e-8, "{}", v.re);
        // ∫₀¹ u^(0.3) du = 1/1.3
        let v = g.integrate_graded(re(|u| u.powf(0.3)), 0.0, 1.0, Grading::new(true, false, 50), 1.0);
        assert!((v.re - 1.0 / 1.3).abs() < 1e-12);
    }

    #[test]
    fn graded_intervals_cover_the_cell() {
        for grading in [Grading::NONE, Grading::new(true, false, 8), Grading::new(false, true, 8), Grading::new(true, true, 8)] {
            let iv = graded_intervals(1.0, 4.0, grading, 0.7);
            assert_eq!(iv.first().unwrap().0, 1.0);
            assert_eq!(iv.last().unwrap().1, 4.0);
            for w in iv.windows(2) {
                assert!((w[0].1 - w[1].0).abs() < 1e-15);
                assert!(w[0].0 < w[0].1);
            }
        }
    }
}
