use alloc::vec::Vec;

/// Where a current series came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Quantum,
    Classical,
    NoiseAveraged,
}

/// `values[n - 1]` is ⟨p⟩ after kick `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentSeries {
    pub kind: SeriesKind,
    pub values: Vec<f64>,
}

impl CurrentSeries {
    pub fn new(kind: SeriesKind, values: Vec<f64>) -> Self {
        Self { kind, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// ⟨p⟩ after kick `n` (1-based).
    pub fn at_kick(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// `(kick, ⟨p⟩)` pairs starting at kick 1.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (i + 1, v))
    }
}
