//! Integer partitions in multiplicity form.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A partition `k = (k_1, k_2, ...)` where `k_m` counts the parts equal to `m`.
///
/// Stored as the multiplicity vector without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    mult: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn from_multiplicities(mut mult: Vec<u32>) -> Self {
        while mult.last() == Some(&0) {
            mult.pop();
        }
        Partition { mult }
    }

    /// From a list of parts in any order; zero parts are ignored.
    pub fn from_parts(parts: &[u32]) -> Self {
        let mut mult = Vec::new();
        for &p in parts {
            if p == 0 {
                continue;
            }
            let i = p as usize - 1;
            if mult.len() <= i {
                mult.resize(i + 1, 0);
            }
            mult[i] += 1;
        }
        Partition { mult }
    }

    pub fn single(part: u32) -> Self {
        Self::from_parts(&[part])
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    /// `k_m`, zero when absent.
    pub fn multiplicity(&self, m: u32) -> u32 {
        if m == 0 {
            return 0;
        }
        self.mult.get(m as usize - 1).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u32 {
        self.mult
            .iter()
            .enumerate()
            .map(|(i, &k)| (i as u32 + 1) * k)
            .sum()
    }

    pub fn len(&self) -> u32 {
        self.mult.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn largest_part(&self) -> Option<u32> {
        if self.mult.is_empty() {
            None
        } else {
            Some(self.mult.len() as u32)
        }
    }

    /// Parts in descending order.
    pub fn parts_descending(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for (i, &k) in self.mult.iter().enumerate().rev() {
            for _ in 0..k {
                v.push(i as u32 + 1);
            }
        }
        v
    }

    pub fn with_part(&self, part: u32) -> Partition {
        let mut mult = self.mult.clone();
        let i = part as usize - 1;
        if mult.len() <= i {
            mult.resize(i + 1, 0);
        }
        mult[i] += 1;
        Partition { mult }
    }

    pub fn without_part(&self, part: u32) -> Option<Partition> {
        if self.multiplicity(part) == 0 {
            return None;
        }
        let mut mult = self.mult.clone();
        mult[part as usize - 1] -= 1;
        Some(Partition::from_multiplicities(mult))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = String;
    fn try_from(v: Vec<u32>) -> Result<Self, String> {
        let p = Partition::from_multiplicities(v);
        // guard the weight computation against overflow on untrusted input
        let mut w: u64 = 0;
        for (i, &k) in p.mult.iter().enumerate() {
            w = w
                .checked_add((i as u64 + 1) * k as u64)
                .ok_or("partition weight overflow")?;
        }
        if w > u32::MAX as u64 {
            return Err("partition weight overflow".into());
        }
        Ok(p)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.mult
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self
            .parts_descending()
            .iter()
            .map(|p| p.to_string())
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n`, ordered by descending lexicographic order of the
/// multiplicity vector `(k_1, k_2, ...)`: `1^n` comes first and `(n)` last.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut mult = vec![0u32; n as usize];
    fill(n, 1, n, &mut mult, &mut out);
    out
}

// assign multiplicities of parts >= m summing to `rest`, larger k_m first
fn fill(n: u32, m: u32, rest: u32, mult: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::from_multiplicities(mult.clone()));
        return;
    }
    if m > n {
        return;
    }
    for k in (0..=rest / m).rev() {
        mult[m as usize - 1] = k;
        fill(n, m + 1, rest - k * m, mult, out);
    }
    mult[m as usize - 1] = 0;
}

/// Pairs `(k, kbar)` with `|k| + |kbar| <= max_level`, grouped by total level.
pub fn bipartitions_up_to(max_level: u32) -> Vec<(Partition, Partition)> {
    let mut out = Vec::new();
    for total in 0..=max_level {
        for left in 0..=total {
            for k in partitions_of(left) {
                for kb in partitions_of(total - left) {
                    out.push((k.clone(), kb));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_oracle(n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|p| count_oracle(n - p, p)).sum()
    }

    #[test]
    fn small_counts() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(8).len(), 22);
        for n in 0..=20 {
            assert_eq!(partitions_of(n).len() as u64, count_oracle(n, n), "n = {n}");
        }
    }

    #[test]
    fn level_two_order() {
        let p = partitions_of(2);
        assert_eq!(
            p,
            vec![Partition::from_parts(&[1, 1]), Partition::from_parts(&[2])]
        );
    }

    #[test]
    fn level_four_order() {
        let got: Vec<Vec<u32>> = partitions_of(4)
            .iter()
            .map(|p| p.parts_descending())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![1, 1, 1, 1],
                vec![2, 1, 1],
                vec![3, 1],
                vec![2, 2],
                vec![4]
            ]
        );
    }

    #[test]
    fn weights_match() {
        for n in 0..=12 {
            for p in partitions_of(n) {
                assert_eq!(p.weight(), n);
                assert_eq!(p.parts_descending().iter().sum::<u32>(), n);
            }
        }
    }

    #[test]
    fn bipartition_counts() {
        let counts: Vec<usize> = (0..=6).map(|l| bipartitions_up_to(l).len()).collect();
        assert_eq!(counts, vec![1, 3, 8, 18, 38, 74, 139]);
    }
}
