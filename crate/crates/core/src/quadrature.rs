//! Composite 5-point Gauss–Legendre rule.
//!
//! Each panel integrates polynomials of degree ≤ 9 exactly.

/// Nodes and weights of the 5-point rule on `[-1, 1]`, ascending.
pub fn gauss_legendre_5() -> [(f64, f64); 5] {
    let r = (10.0f64 / 7.0).sqrt();
    let inner = (5.0 - 2.0 * r).sqrt() / 3.0;
    let outer = (5.0 + 2.0 * r).sqrt() / 3.0;
    let s70 = 70.0f64.sqrt();
    let w_inner = (322.0 + 13.0 * s70) / 900.0;
    let w_outer = (322.0 - 13.0 * s70) / 900.0;
    [
        (-outer, w_outer),
        (-inner, w_inner),
        (0.0, 128.0 / 225.0),
        (inner, w_inner),
        (outer, w_outer),
    ]
}

/// Nodes and weights of `panels` equal panels on `[a, b]`, ascending.
pub fn composite_rule(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let rule = gauss_legendre_5();
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(5 * panels);
    for p in 0..panels {
        let left = a + h * p as f64;
        let mid = left + 0.5 * h;
        for (x, w) in rule {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

/// Pairwise (tree) summation in the given order.
pub fn pairwise_sum<V: Clone>(items: &[V], add: &impl Fn(&V, &V) -> V) -> Option<V> {
    match items.len() {
        0 => None,
        1 => Some(items[0].clone()),
        n => {
            let (l, r) = items.split_at(n / 2);
            let l = pairwise_sum(l, add)?;
            let r = pairwise_sum(r, add)?;
            Some(add(&l, &r))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_rule_is_exact_through_degree_nine() {
        let rule = gauss_legendre_5();
        for d in 0..=9 {
            let approx: f64 = rule.iter().map(|(x, w)| w * x.powi(d)).sum();
            let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
            assert!((approx - exact).abs() < 1e-15, "degree {d}");
        }
        let d10: f64 = rule.iter().map(|(x, w)| w * x.powi(10)).sum();
        assert!((d10 - 2.0 / 11.0).abs() > 1e-6);
    }

    #[test]
    fn composite_nodes_ascend_and_weights_sum_to_length() {
        let rule = composite_rule(-0.5, 2.0, 7);
        assert_eq!(rule.len(), 35);
        assert!(rule.windows(2).all(|w| w[0].0 < w[1].0));
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 2.5).abs() < 1e-14);
    }

    #[test]
    fn pairwise_sum_matches_sequential_for_integers() {
        let v: Vec<i64> = (1..=37).collect();
        assert_eq!(pairwise_sum(&v, &|a, b| a + b), Some(703));
        assert_eq!(pairwise_sum::<i64>(&[], &|a, b| a + b), None);
    }
}
