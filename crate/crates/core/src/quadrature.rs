//! Gauss–Legendre rules, composite panels and geometrically graded meshes
//! for integrands with algebraic endpoint singularities.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
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

    /// Cached 16-point rule used as the default panel rule.
    pub fn order16() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral of `f` over [a, b] with a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    /// Visit every (node, weight) pair of the rule mapped to [a, b].
    pub fn for_each_node<F: FnMut(f64, f64)>(&self, a: f64, b: f64, mut f: F) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            f(c + h * x, w * h);
        }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
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

/// Composite rule: `panels` equal panels over [a, b].
pub fn composite<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for i in 0..panels {
        let lo = a + h * i as f64;
        s += rule.integrate(&mut f, lo, lo + h);
    }
    s
}

/// Mesh description for an integral over [a, b] whose integrand may behave
/// like `|x - a|^{-alpha}` or `|b - x|^{-alpha}` at the ends.
#[derive(Debug, Clone, Copy)]
pub struct GradedMesh {
    /// Singular exponent at the left end, if any (must be < 1).
    pub left: Option<f64>,
    /// Singular exponent at the right end, if any (must be < 1).
    pub right: Option<f64>,
    /// Maximal panel width away from the singular points.
    pub max_width: f64,
    /// Geometric grading ratio.
    pub ratio: f64,
    /// Number of geometric levels.
    pub levels: usize,
}

impl GradedMesh {
    pub fn new(left: Option<f64>, right: Option<f64>, max_width: f64) -> Self {
        Self {
            left,
            right,
            max_width,
            ratio: 0.2,
            levels: 14,
        }
    }
}

/// Integrate `f` on [a, b] over a geometrically graded mesh.
///
/// The innermost panel at a singular end uses the substitution
/// `x = a + eps * u^q` with `q = 1 / (1 - alpha)`, which removes the
/// algebraic singularity.
pub fn integrate_graded<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    mut f: F,
    a: f64,
    b: f64,
    mesh: &GradedMesh,
) -> f64 {
    integrate_graded_dist(rule, |x, _, _| f(x), a, b, mesh)
}

/// As [`integrate_graded`], but `f(x, x - a, b - x)` also receives both
/// endpoint distances without cancellation.
pub fn integrate_graded_dist<F: FnMut(f64, f64, f64) -> f64>(
    rule: &GaussLegendre,
    mut f: F,
    a: f64,
    b: f64,
    mesh: &GradedMesh,
) -> f64 {
    let len = b - a;
    match (mesh.left, mesh.right) {
        (Some(al), Some(ar)) => {
            let half = 0.5 * len;
            let left = graded_from_zero(rule, &mut |t: f64| f(a + t, t, len - t), half, al, mesh);
            left + graded_from_zero(rule, &mut |t: f64| f(b - t, len - t, t), half, ar, mesh)
        }
        (Some(al), None) => graded_from_zero(rule, &mut |t: f64| f(a + t, t, len - t), len, al, mesh),
        (None, Some(ar)) => graded_from_zero(rule, &mut |t: f64| f(b - t, len - t, t), len, ar, mesh),
        (None, None) => {
            let n = (len / mesh.max_width).ceil().max(1.0) as usize;
            composite(rule, |x| f(x, x - a, b - x), a, b, n)
        }
    }
}

/// `\int_0^width g(t) dt` with `g(t) ~ t^{-alpha}` at 0.
fn graded_from_zero<G: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    g: &mut G,
    width: f64,
    alpha: f64,
    mesh: &GradedMesh,
) -> f64 {
    assert!(alpha < 1.0, "non-integrable endpoint singularity");
    if width <= 0.0 {
        return 0.0;
    }
    let mut s = 0.0;
    let mut outer = width;
    for _ in 0..mesh.levels {
        let inner = outer * mesh.ratio;
        let n = ((outer - inner) / mesh.max_width).ceil().max(1.0) as usize;
        s += composite(rule, &mut *g, inner, outer, n);
        outer = inner;
    }
    let eps = outer;
    let q = if alpha > 0.0 { 1.0 / (1.0 - alpha) } else { 1.0 };
    s += rule.integrate(|u: f64| eps * q * u.powf(q - 1.0) * g(eps * u.powf(q)), 0.0, 1.0);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        for k in 0..16u32 {
            let exact = (1.0 - (-1.0f64).powi(k as i32 + 1)) / (k as f64 + 1.0);
            let got = rule.integrate(|x| x.powi(k as i32), -1.0, 1.0);
            assert_relative_eq!(got, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 40] {
            let s: f64 = GaussLegendre::new(n).weights.iter().sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn graded_handles_algebraic_singularity() {
        let rule = GaussLegendre::order16();
        for alpha in [0.1, 0.5, 0.9] {
            let mesh = GradedMesh::new(Some(alpha), None, 0.5);
            let got = integrate_graded(rule, |x: f64| x.powf(-alpha) * x.cos(), 0.0, 1.0, &mesh);
            // Reference by series: sum (-1)^n / ((2n)! (2n + 1 - alpha)).
            let mut exact = 0.0;
            let mut fact = 1.0;
            for n in 0..20 {
                if n > 0 {
                    fact *= (2 * n - 1) as f64 * (2 * n) as f64;
                }
                exact += (-1.0f64).powi(n) / (fact * (2.0 * n as f64 + 1.0 - alpha));
            }
            assert_relative_eq!(got, exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn graded_two_sided() {
        let rule = GaussLegendre::order16();
        let mesh = GradedMesh::new(Some(0.5), Some(0.5), 0.25);
        let got = integrate_graded_dist(rule, |_, da, db| 1.0 / (da * db).sqrt(), 0.0, 1.0, &mesh);
        assert_relative_eq!(got, PI, epsilon = 1e-12);
    }
}
