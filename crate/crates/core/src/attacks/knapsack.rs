//! Greedy fractional knapsack used by the budget-limited attacks.

use std::cmp::Ordering;

/// Outcome of the greedy: a prefix of the items sorted by value density.
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackChoice {
    /// Item indices by nonincreasing value/weight, ties in input order.
    pub order: Vec<usize>,
    /// The longest prefix of `order` that fits.
    pub chosen: Vec<usize>,
    /// The first item that did not fit.
    pub next: Option<usize>,
    pub value: f64,
    pub weight: f64,
    /// Fraction of `next` that would fill the remaining capacity.
    pub beta1: f64,
}

/// Greedy over `(value, weight)` items with capacity `fraction * total weight`.
pub fn fractional_knapsack_greedy(items: &[(f64, f64)], fraction: f64) -> KnapsackChoice {
    let total: f64 = items.iter().map(|&(_, w)| w).sum();
    greedy_with_capacity(items, fraction * total)
}

pub(crate) fn greedy_with_capacity(items: &[(f64, f64)], capacity: f64) -> KnapsackChoice {
    let density = |i: usize| {
        let (v, w) = items[i];
        if w > 0.0 {
            v / w
        } else {
            f64::INFINITY
        }
    };
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&x, &y| density(y).partial_cmp(&density(x)).unwrap_or(Ordering::Equal));

    let limit = capacity + 1e-9;
    let (mut value, mut weight) = (0.0, 0.0);
    let mut chosen = Vec::new();
    let mut next = None;
    for &i in &order {
        let (v, w) = items[i];
        if weight + w > limit {
            next = Some(i);
            break;
        }
        weight += w;
        value += v;
        chosen.push(i);
    }
    let beta1 = next.map_or(0.0, |i| ((capacity - weight) / items[i].1).clamp(0.0, 1.0));
    KnapsackChoice { order, chosen, next, value, weight, beta1 }
}
