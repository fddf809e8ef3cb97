use num_complex::Complex64;

/// `ln(10¹⁶)`: the parabola is cut where `|e^{st}|` has dropped this far
/// below its value at the real-axis crossing.
const TRUNCATION_LOG: f64 = 36.841_361_487_904_734;

/// A quadrature node on the deformed Bromwich contour.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub s: Complex64,
    /// `ds/du · h`, the node weight including the parameter step.
    pub weight: Complex64,
}

/// Midpoint nodes on the upper half (`u > 0`) of a contour that is symmetric
/// under `u → −u`, `s → conj(s)`. `node_count` is the full-contour count.
pub(crate) fn parabolic_upper(mu: f64, t: f64, node_count: usize) -> Vec<Node> {
    // s(u) = μ(1 + iu)², u ∈ [−u_max, u_max]
    let u_max = (TRUNCATION_LOG / (mu * t)).sqrt();
    let h = 2.0 * u_max / node_count as f64;
    (0..node_count / 2)
        .map(|k| {
            let u = (k as f64 + 0.5) * h;
            let w = Complex64::new(1.0, u);
            Node {
                s: w * w * mu,
                weight: Complex64::new(0.0, 2.0 * mu) * w * h,
            }
        })
        .collect()
}

/// `s(θ) = r·θ·(cot θ + i)`, θ ∈ (−π, π).
pub(crate) fn talbot_upper(r: f64, node_count: usize) -> Vec<Node> {
    let h = 2.0 * std::f64::consts::PI / node_count as f64;
    (0..node_count / 2)
        .map(|k| {
            let theta = (k as f64 + 0.5) * h;
            let cot = theta.cos() / theta.sin();
            let sin2 = theta.sin().powi(2);
            Node {
                s: Complex64::new(r * theta * cot, r * theta),
                weight: Complex64::new(r * (cot - theta / sin2), r) * h,
            }
        })
        .collect()
}

/// Mirrors upper-half nodes into the full contour, lower half first.
pub(crate) fn full(upper: &[Node]) -> Vec<Node> {
    upper
        .iter()
        .rev()
        .map(|n| Node {
            s: n.s.conj(),
            weight: -n.weight.conj(),
        })
        .chain(upper.iter().copied())
        .collect()
}
