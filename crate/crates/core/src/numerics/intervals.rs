use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Ordered union of disjoint open intervals `(a_i, b_i)` on the time axis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    /// Validates ordering, disjointness and finiteness.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for (k, &(a, b)) in intervals.iter().enumerate() {
            if !(a.is_finite() && b.is_finite() && a >= 0.0 && a < b) {
                return Err(Error::invalid(format!("bad interval ({a}, {b})")));
            }
            if k > 0 && intervals[k - 1].1 > a {
                return Err(Error::invalid(format!(
                    "intervals overlap or are unordered at ({a}, {b})"
                )));
            }
        }
        Ok(IntervalSet { intervals })
    }

    /// Maximal intervals of `[0, t_max]` on which `holds` is true, given the
    /// sorted points where it may switch. The predicate is probed at the
    /// midpoint of each gap between consecutive breakpoints; adjacent
    /// satisfied gaps are merged.
    pub fn from_breakpoints<P: Fn(f64) -> bool>(
        breakpoints: &[f64],
        t_max: f64,
        holds: P,
    ) -> Self {
        let mut edges: Vec<f64> = Vec::with_capacity(breakpoints.len() + 2);
        edges.push(0.0);
        edges.extend(breakpoints.iter().copied().filter(|&t| t > 0.0 && t < t_max));
        edges.push(t_max);
        edges.sort_by(f64::total_cmp);
        edges.dedup();

        let mut out: Vec<(f64, f64)> = Vec::new();
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a || !holds(0.5 * (a + b)) {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.1 == a => last.1 = b,
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a < t && t < b)
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.intervals.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_adjacent_gaps() {
        let set = IntervalSet::from_breakpoints(&[1.0, 2.0, 3.0], 4.0, |t| t > 1.0 && t < 3.0);
        assert_eq!(set.intervals(), &[(1.0, 3.0)]);
    }

    #[test]
    fn validation() {
        assert!(IntervalSet::new(alloc::vec![(1.0, 0.5)]).is_err());
        assert!(IntervalSet::new(alloc::vec![(0.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(IntervalSet::new(alloc::vec![(0.0, 1.0), (1.0, 3.0)]).is_ok());
    }
}
