//! Dominance on canonical (all-maximise) integer vectors.

use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthMismatch {
    pub left: usize,
    pub right: usize,
}

/// `a` weakly improves on `b` everywhere and strictly somewhere.
pub fn dominates(a: &[i64], b: &[i64]) -> Result<bool, LengthMismatch> {
    if a.len() != b.len() {
        return Err(LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return Ok(false);
        }
        if x > y {
            strict = true;
        }
    }
    Ok(strict)
}

/// Indices of the vectors not dominated by any other vector of the slice.
/// Duplicates do not dominate each other, so all copies survive.
pub fn nondominated_indices<V: AsRef<[i64]>>(points: &[V]) -> Result<Vec<usize>, LengthMismatch> {
    let mut keep = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i != j && dominates(q.as_ref(), p.as_ref())? {
                continue 'outer;
            }
        }
        keep.push(i);
    }
    Ok(keep)
}

/// Projects each vector on the given coordinates.
pub fn project(point: &[i64], coords: &[usize]) -> Vec<i64> {
    coords.iter().map(|&c| point[c]).collect()
}

/// Incrementally maintained set of mutually non-dominated, distinct vectors.
#[derive(Clone, Debug, Default)]
pub struct ParetoArchive<T> {
    entries: Vec<(Vec<i64>, T)>,
}

impl<T> ParetoArchive<T> {
    pub fn new() -> Self {
        ParetoArchive { entries: Vec::new() }
    }

    /// Inserts `point` unless it is dominated by or equal to an archived
    /// vector; removes archived vectors it dominates. Returns whether the point
    /// was added.
    pub fn insert(&mut self, point: Vec<i64>, payload: T) -> bool {
        for (p, _) in &self.entries {
            if p == &point || dominates(p, &point).unwrap_or(false) {
                return false;
            }
        }
        self.entries.retain(|(p, _)| !dominates(&point, p).unwrap_or(false));
        self.entries.push((point, payload));
        true
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Vec<i64>, T)> {
        self.entries.iter()
    }

    pub fn into_entries(self) -> Vec<(Vec<i64>, T)> {
        self.entries
    }

    /// Whether some archived vector weakly dominates `point`.
    pub fn covers(&self, point: &[i64]) -> bool {
        self.entries
            .iter()
            .any(|(p, _)| p.iter().zip(point).all(|(a, b)| a >= b))
    }
}
