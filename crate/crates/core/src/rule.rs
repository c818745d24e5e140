//! The quadrature rule container shared by every method.

use serde::Serialize;

/// Which weight function a rule integrates against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WeightTag {
    /// `e^{-x^2}`
    Hermite,
    /// `e^{-V(x)}`, `V` given by its monomial coefficients (constant first).
    Freud { coeffs: Vec<f64> },
}

impl std::fmt::Display for WeightTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightTag::Hermite => write!(f, "hermite"),
            WeightTag::Freud { coeffs } => {
                let parts: Vec<String> = coeffs.iter().map(|c| format!("{c}")).collect();
                write!(f, "freud[{}]", parts.join(","))
            }
        }
    }
}

/// Nodes in ascending order with matching positive weights.
///
/// When a rule is subsampled only the nodes whose weights are non-negligible
/// are stored; `trivial_skipped` counts the omitted nodes on each side (the
/// larger count when the weight is not symmetric) and `first_index` is the
/// position of `nodes[0]` in the full rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub weight_tag: WeightTag,
    pub trivial_skipped: usize,
    pub first_index: usize,
    /// Size of the full rule.
    pub n: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_k w_k f(x_k)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Builds a symmetric rule from the non-negative half.
    ///
    /// `pos_nodes`/`pos_weights` run from the center outward and exclude the
    /// zero node, which is passed separately for odd sizes.
    pub(crate) fn from_half(
        center: Option<f64>,
        pos_nodes: &[f64],
        pos_weights: &[f64],
        weight_tag: WeightTag,
        trivial_skipped: usize,
        n: usize,
    ) -> Self {
        let m = pos_nodes.len();
        let len = 2 * m + usize::from(center.is_some());
        let mut nodes = Vec::with_capacity(len);
        let mut weights = Vec::with_capacity(len);
        for i in (0..m).rev() {
            nodes.push(-pos_nodes[i]);
            weights.push(pos_weights[i]);
        }
        if let Some(w0) = center {
            nodes.push(0.0);
            weights.push(w0);
        }
        for i in 0..m {
            nodes.push(pos_nodes[i]);
            weights.push(pos_weights[i]);
        }
        QuadratureRule {
            nodes,
            weights,
            weight_tag,
            trivial_skipped,
            first_index: trivial_skipped,
            n,
        }
    }

    /// Drops leading and trailing nodes whose weights are below the
    /// smallest normal double.
    pub fn drop_negligible(&mut self) {
        let small = |w: &&f64| **w < f64::MIN_POSITIVE;
        let left = self.weights.iter().take_while(small).count();
        if left == self.weights.len() {
            return;
        }
        let right = self.weights.iter().rev().take_while(small).count();
        let len = self.nodes.len();
        self.nodes = self.nodes[left..len - right].to_vec();
        self.weights = self.weights[left..len - right].to_vec();
        self.first_index += left;
        self.trivial_skipped += left.max(right);
    }
}
