use std::collections::HashMap;

use crate::data::ResponseMatrix;

/// Distinct response patterns with their frequencies. Likelihood terms are
/// identical for subjects sharing a pattern, so the estimators work on this
/// compressed form.
#[derive(Debug, Clone)]
pub struct Patterns {
    n_items: usize,
    /// Row-major distinct patterns, in order of first appearance.
    values: Vec<u8>,
    counts: Vec<f64>,
    /// Pattern index of every subject.
    subject_pattern: Vec<usize>,
}

impl Patterns {
    pub fn new(data: &ResponseMatrix) -> Self {
        let j = data.n_items();
        let mut index: HashMap<&[u8], usize> = HashMap::with_capacity(data.n_subjects());
        let mut values = Vec::new();
        let mut counts = Vec::new();
        let mut subject_pattern = Vec::with_capacity(data.n_subjects());
        for row in data.rows() {
            let p = *index.entry(row).or_insert_with(|| {
                values.extend_from_slice(row);
                counts.push(0.0);
                counts.len() - 1
            });
            counts[p] += 1.0;
            subject_pattern.push(p);
        }
        Patterns {
            n_items: j,
            values,
            counts,
            subject_pattern,
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn pattern(&self, p: usize) -> &[u8] {
        &self.values[p * self.n_items..(p + 1) * self.n_items]
    }

    pub fn count(&self, p: usize) -> f64 {
        self.counts[p]
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn subject_pattern(&self) -> &[usize] {
        &self.subject_pattern
    }

    pub fn n_subjects(&self) -> usize {
        self.subject_pattern.len()
    }
}
