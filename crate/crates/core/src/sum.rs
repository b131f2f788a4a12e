//! Order-stable summation.

use crate::scalar::Real;

const LEAF: usize = 32;

/// Pairwise summation; the reduction tree depends only on the slice length.
pub fn pairwise<T: Real>(xs: &[T]) -> T {
    if xs.len() <= LEAF {
        let mut acc = Neumaier::new();
        for &x in xs {
            acc.add(x);
        }
        return acc.total();
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Neumaier<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn total(&self) -> T {
        self.sum + self.comp
    }
}

/// Running partial sums of `xs`, compensated.
pub fn cumulative<T: Real>(xs: &[T]) -> Vec<T> {
    let mut acc = Neumaier::new();
    xs.iter()
        .map(|&x| {
            acc.add(x);
            acc.total()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_integer_sum() {
        let xs: Vec<f64> = (1..=10_000).map(|n| n as f64).collect();
        assert_eq!(pairwise(&xs), 50_005_000.0);
    }

    #[test]
    fn neumaier_recovers_cancelled_mass() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(pairwise(&xs), 2.0);
    }

    #[test]
    fn cumulative_is_monotone_for_positive_terms() {
        let xs: Vec<f32> = (1..100).map(|n| 1.0 / n as f32).collect();
        let c = cumulative(&xs);
        assert!(c.windows(2).all(|w| w[1] > w[0]));
    }
}
