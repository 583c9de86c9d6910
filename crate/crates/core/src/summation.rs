//! Compensated (Neumaier) summation and a deterministic row-parallel reduction.
//!
//! Million-pixel reductions are split into fixed row chunks. Each chunk is summed with
//! its own compensated accumulator and the partial results are combined left to right
//! in row order, so the result depends only on the data and never on the thread count.

use std::ops::{Add, AddAssign};

use rayon::prelude::*;

use crate::scalar::Scalar;

/// Running sum with a Neumaier correction term.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.carry
    }

    #[inline]
    fn push(&mut self, x: T) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.carry = self.carry + e;
    }
}

#[inline]
fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let e = if a.abs() >= b.abs() {
        (a - s) + b
    } else {
        (b - s) + a
    };
    (s, e)
}

impl<T: Scalar> AddAssign<T> for CompensatedSum<T> {
    #[inline]
    fn add_assign(&mut self, rhs: T) {
        self.push(rhs);
    }
}

impl<T: Scalar> Add for CompensatedSum<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self.push(rhs.sum);
        self.push(rhs.carry);
        self
    }
}

impl<T: Scalar> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc += x;
        }
        acc
    }
}

/// Compensated sum of a slice.
pub fn sum<T: Scalar>(values: &[T]) -> T {
    values.iter().copied().collect::<CompensatedSum<T>>().value()
}

/// Rows below this many elements are not worth a rayon task.
const MIN_PARALLEL_LEN: usize = 1 << 14;

/// Reduces `len` elements laid out as rows of `row_len` into `K` compensated sums.
///
/// `row` receives the row index and fills the `K` accumulators for that row. Rows are
/// combined in index order regardless of how they were scheduled.
pub fn reduce_rows<T, const K: usize, F>(len: usize, row_len: usize, row: F) -> [T; K]
where
    T: Scalar,
    F: Fn(usize, &mut [CompensatedSum<T>; K]) + Sync,
{
    let row_len = row_len.max(1);
    let rows = len.div_ceil(row_len);
    let per_row = |r: usize| {
        let mut acc = [CompensatedSum::<T>::new(); K];
        row(r, &mut acc);
        acc
    };
    let partials: Vec<[CompensatedSum<T>; K]> = if len >= MIN_PARALLEL_LEN {
        (0..rows).into_par_iter().map(per_row).collect()
    } else {
        (0..rows).map(per_row).collect()
    };
    let mut total = [CompensatedSum::<T>::new(); K];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t = *t + p;
        }
    }
    total.map(|acc| acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let s: CompensatedSum<f64> = [1e200, 0.1, 0.2, 0.3, -1e200].into_iter().collect();
        assert!((s.value() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn beats_naive_summation() {
        let n = 2_073_600usize;
        let w = 1.0 / n as f64;
        let naive: f64 = std::iter::repeat_n(w, n).sum();
        let comp = sum(&vec![w; n]);
        assert!((comp - 1.0).abs() <= (naive - 1.0).abs());
        assert!((comp - 1.0).abs() < 1e-15);
    }

    #[test]
    fn merging_partials_matches_serial() {
        let xs: Vec<f64> = (0..10_000).map(|i| ((i as f64) * 0.37).sin()).collect();
        let serial = sum(&xs);
        let (a, b) = xs.split_at(4_321);
        let merged = (a.iter().copied().collect::<CompensatedSum<f64>>()
            + b.iter().copied().collect::<CompensatedSum<f64>>())
        .value();
        assert!((serial - merged).abs() < 1e-14);
    }

    #[test]
    fn row_reduction_is_thread_count_independent() {
        let width = 512;
        let xs: Vec<f64> = (0..width * 300).map(|i| ((i as f64) * 1e-3).cos()).collect();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                reduce_rows::<f64, 1, _>(xs.len(), width, |r, acc| {
                    for &x in &xs[r * width..(r + 1) * width] {
                        acc[0] += x;
                    }
                })
            })
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one[0].to_bits(), four[0].to_bits());
        assert!((one[0] - sum(&xs)).abs() < 1e-12);
    }

    #[test]
    fn handles_ragged_last_row() {
        let xs = [1.0f32, 2.0, 3.0, 4.0, 5.0];
        let [s] = reduce_rows::<f32, 1, _>(xs.len(), 2, |r, acc| {
            for &x in xs.iter().skip(r * 2).take(2) {
                acc[0] += x;
            }
        });
        assert_eq!(s, 15.0);
    }
}
