use std::fmt;

/// A total truth assignment over an indexed proposition set.
///
/// Ordering is lexicographic by index with `false < true`, which is the
/// enumeration order used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn all_false(len: usize) -> Self {
        Assignment(vec![false; len])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    /// The `rank`-th assignment in lexicographic order over `len` propositions.
    pub fn from_rank(len: usize, rank: u64) -> Self {
        Assignment(
            (0..len)
                .map(|i| (rank >> (len - 1 - i)) & 1 == 1)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn true_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, v)| **v).map(|(i, _)| i)
    }

    /// Number of positions on which the two assignments differ.
    pub fn hamming(&self, other: &Assignment) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Restriction to the first `len` propositions.
    pub fn prefix(&self, len: usize) -> Assignment {
        Assignment(self.0[..len].to_vec())
    }

    pub fn extended(&self, extra: usize) -> Assignment {
        let mut bits = self.0.clone();
        bits.resize(self.0.len() + extra, false);
        Assignment(bits)
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", if *b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// All `2^len` assignments in lexicographic order.
pub fn all_assignments(len: usize) -> impl Iterator<Item = Assignment> {
    (0..1u64 << len).map(move |r| Assignment::from_rank(len, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_order_is_lexicographic() {
        let all: Vec<_> = all_assignments(3).collect();
        assert_eq!(all.len(), 8);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[1].bits(), &[false, false, true]);
    }

    #[test]
    fn hamming_distance() {
        let a = Assignment::from_bits(vec![true, false, true]);
        let b = Assignment::from_bits(vec![false, false, false]);
        assert_eq!(a.hamming(&b), 2);
        assert_eq!(a.hamming(&a), 0);
    }
}
