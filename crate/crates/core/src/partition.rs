//! Integer partitions and the two equal ways of summing minima over them.

use std::fmt;

use crate::error::{Error, Result};

/// Weakly decreasing positive parts; the empty partition is the partition of 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Accepts only weakly decreasing, positive parts.
    pub fn from_parts(parts: Vec<usize>) -> Result<Partition> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    /// `(1, 1, ..., 1)` with `n` parts.
    pub fn ones(n: usize) -> Partition {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Largest part, 0 for the empty partition.
    pub fn first(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    /// `i`-th part (0-based), 0 past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Transpose of the Young diagram: part `i` counts parts `>= i`.
    pub fn conjugate(&self) -> Partition {
        Partition((1..=self.first()).map(|i| self.0.iter().take_while(|&&p| p >= i).count()).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Sum over every choice of one part from each partition of the smallest chosen part.
pub fn minsum(ps: &[Partition]) -> Result<usize> {
    if ps.is_empty() {
        return Err(Error::EmptyList);
    }
    fn go(rest: &[Partition], bound: usize) -> usize {
        match rest.split_first() {
            None => bound,
            Some((head, tail)) => head.parts().iter().map(|&p| go(tail, bound.min(p))).sum(),
        }
    }
    Ok(go(ps, usize::MAX))
}

/// `sum_{i=1}^{m} prod_j (p_j)'_i` with `m` the smallest first part.
pub fn conjprod(ps: &[Partition]) -> Result<usize> {
    if ps.is_empty() {
        return Err(Error::EmptyList);
    }
    let conj: Vec<Partition> = ps.iter().map(Partition::conjugate).collect();
    let m = ps.iter().map(Partition::first).min().unwrap_or(0);
    Ok((0..m).map(|i| conj.iter().map(|c| c.part(i)).product::<usize>()).sum())
}

/// Dimension of the space of matrices intertwining two nilpotent Jordan forms.
pub fn nilpotent_pair_dim(lambda: &Partition, mu: &Partition) -> usize {
    conjprod(&[lambda.clone(), mu.clone()]).expect("two partitions")
}
