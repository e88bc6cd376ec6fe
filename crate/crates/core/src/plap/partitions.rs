use crate::error::{Error, Result};

/// Largest order accepted by [`enumerate_partitions`].
pub const MAX_PARTITION_ORDER: usize = 24;

/// Integer partition of `n` stored as multiplicities: `mult[j-1]` copies of part `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    pub mult: Vec<usize>,
}

impl Partition {
    /// `Σ j·p_j`.
    pub fn weight(&self) -> usize {
        self.mult
            .iter()
            .enumerate()
            .map(|(i, &m)| (i + 1) * m)
            .sum()
    }

    /// `‖p‖₁ = Σ p_j`.
    pub fn norm(&self) -> usize {
        self.mult.iter().sum()
    }

    /// `Π p_j!`.
    pub fn mult_factorial(&self) -> f64 {
        self.mult.iter().map(|&m| factorial(m)).product()
    }

    /// Parts with non-zero multiplicity as `(part, multiplicity)`.
    pub fn parts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i + 1, m))
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// All partitions of `n` (`1 ≤ n ≤ 24`) as multiplicity vectors of length `n`.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_PARTITION_ORDER {
        return Err(Error::arg(format!(
            "partition order must lie in 1..={MAX_PARTITION_ORDER}, got {n}"
        )));
    }
    Ok(partitions_unchecked(n))
}

/// Partitions of `n` including the empty partition of 0.
pub(crate) fn partitions_unchecked(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut mult = vec![0; n];
    fill(n, n, &mut mult, &mut out);
    out
}

// Distribute `rest` over parts no larger than `largest`, largest part first.
fn fill(rest: usize, largest: usize, mult: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { mult: mult.clone() });
        return;
    }
    if largest == 0 {
        return;
    }
    for count in (0..=rest / largest).rev() {
        mult[largest - 1] = count;
        fill(rest - count * largest, largest - 1, mult, out);
    }
    mult[largest - 1] = 0;
}
