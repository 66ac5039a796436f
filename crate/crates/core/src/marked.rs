//! 4-marked groups compared by their relators: two markings agree up to
//! radius `m` when every reduced word of length `≤ m` is trivial in both or
//! in neither. The distance is `2^-m`.

use rayon::prelude::*;

use crate::enumerate::{ContextGroup, GroupContext};
use crate::words::{reduced_words_of_length, Word};

/// A context with its canonical generating tuple `(a, b, c, d)`.
pub struct MarkedPoint {
    group: ContextGroup,
}

impl MarkedPoint {
    pub fn new(ctx: GroupContext) -> MarkedPoint {
        MarkedPoint {
            group: ContextGroup::new(ctx),
        }
    }

    pub fn context(&self) -> &GroupContext {
        self.group.context()
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.group.is_trivial(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub radius: usize,
    pub max_len: usize,
    /// `(length, every word of that length agrees)` for lengths `1..=checked`.
    pub rows: Vec<(usize, bool)>,
    /// Shortlex-first word whose triviality differs, if any.
    pub witness: Option<Word>,
}

impl Agreement {
    pub fn distance(&self) -> f64 {
        0.5f64.powi(self.radius as i32)
    }

    pub fn summary(&self) -> String {
        format!("radius={} distance=2^-{}", self.radius, self.radius)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,agree\n");
        for (len, ok) in &self.rows {
            out.push_str(&format!("{len},{}\n", *ok as u8));
        }
        out
    }
}

pub fn agreement(p: &MarkedPoint, q: &MarkedPoint, max_len: usize) -> Agreement {
    let mut rows = Vec::new();
    for len in 1..=max_len {
        let words = reduced_words_of_length(len);
        let differs: Vec<bool> = words
            .par_iter()
            .map(|w| p.is_trivial(w) != q.is_trivial(w))
            .collect();
        if let Some(i) = differs.iter().position(|&d| d) {
            rows.push((len, false));
            return Agreement {
                radius: len - 1,
                max_len,
                rows,
                witness: Some(words[i].clone()),
            };
        }
        rows.push((len, true));
    }
    Agreement {
        radius: max_len,
        max_len,
        rows,
        witness: None,
    }
}

/// Largest `m ≤ max_len` with agreeing relators up to length `m`.
pub fn agreement_radius(p: &MarkedPoint, q: &MarkedPoint, max_len: usize) -> usize {
    agreement(p, q, max_len).radius
}

pub fn convergence_table(points: &[MarkedPoint], target: &MarkedPoint, max_len: usize) -> Vec<usize> {
    points.iter().map(|p| agreement_radius(p, target, max_len)).collect()
}
