//! Walker/Vose alias table for O(1) draws from a fixed discrete distribution.

use rand::Rng;

/// Alias table over indices `0..len`.
#[derive(Debug, Clone)]
pub struct AliasTable {
    /// Acceptance probability of column `i` keeping index `i`.
    accept: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    /// Builds the table from nonnegative weights. Returns `None` for an empty input,
    /// more than `u32::MAX` entries, or weights that are not all finite, nonnegative and
    /// with a positive sum.
    pub fn new(weights: &[f64]) -> Option<Self> {
        let n = weights.len();
        if n == 0 || n > u32::MAX as usize {
            return None;
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return None;
        }
        let total: f64 = crate::summation::sum(weights);
        if !(total > 0.0) {
            return None;
        }

        let scale = n as f64 / total;
        let mut accept: Vec<f64> = weights.iter().map(|w| w * scale).collect();
        let mut alias: Vec<u32> = (0..n as u32).collect();

        let mut small = Vec::new();
        let mut large = Vec::new();
        for (i, &a) in accept.iter().enumerate() {
            if a < 1.0 {
                small.push(i as u32);
            } else {
                large.push(i as u32);
            }
        }

        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s as usize] = l;
            let rest = (accept[l as usize] + accept[s as usize]) - 1.0;
            accept[l as usize] = rest;
            if rest < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers are 1 up to rounding.
        for i in small.into_iter().chain(large) {
            accept[i as usize] = 1.0;
        }

        Some(Self { accept, alias })
    }

    pub fn len(&self) -> usize {
        self.accept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accept.is_empty()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let column = rng.random_range(0..self.accept.len() as u64) as usize;
        if rng.random::<f64>() < self.accept[column] {
            column
        } else {
            self.alias[column] as usize
        }
    }

    /// Probability mass the table assigns to `index`.
    pub fn probability(&self, index: usize) -> f64 {
        let n = self.len() as f64;
        let own = self.accept[index];
        let donated: f64 = self
            .alias
            .iter()
            .zip(&self.accept)
            .enumerate()
            .filter(|&(col, (&a, _))| a as usize == index && col != index)
            .map(|(_, (_, &acc))| 1.0 - acc)
            .sum();
        (own + donated) / n
    }
}
