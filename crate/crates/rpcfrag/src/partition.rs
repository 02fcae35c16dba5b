//! Set partitions of {1,…,n} in canonical form.
//!
//! Canonical form: every block sorted increasingly, blocks ordered by least
//! element. All constructors normalize to it, so structural equality is
//! partition equality.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition of the ground set {1,…,n} into disjoint nonempty blocks.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Canonicalizes raw blocks into a partition of {1,…,n}.
    pub fn new(n: usize, raw_blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("ground set must be nonempty".into()));
        }
        let mut seen = vec![false; n + 1];
        let mut count = 0usize;
        let mut blocks = Vec::with_capacity(raw_blocks.len());
        for mut block in raw_blocks {
            if block.is_empty() {
                return Err(Error::MalformedPartition("empty block".into()));
            }
            block.sort_unstable();
            for &e in &block {
                if e == 0 || e > n {
                    return Err(Error::MalformedPartition(format!(
                        "element {e} outside ground set [{n}]"
                    )));
                }
                if seen[e] {
                    return Err(Error::MalformedPartition(format!("element {e} repeated")));
                }
                seen[e] = true;
                count += 1;
            }
            blocks.push(block);
        }
        if count != n {
            return Err(Error::MalformedPartition(format!(
                "blocks cover {count} of {n} elements"
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// Builds from blocks whose union defines the ground set.
    pub fn from_blocks(raw_blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = raw_blocks.iter().map(Vec::len).sum();
        Self::new(n, raw_blocks)
    }

    /// Builds from per-element block labels (`labels[i]` labels element i+1).
    pub fn from_assignments(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("ground set must be nonempty".into()));
        }
        let mut order: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &lab) in labels.iter().enumerate() {
            match order.iter().position(|&l| l == lab) {
                Some(j) => blocks[j].push(i + 1),
                None => {
                    order.push(lab);
                    blocks.push(vec![i + 1]);
                }
            }
        }
        Self::new(labels.len(), blocks)
    }

    /// The partition of [n] into n singleton blocks.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(n, (1..=n).map(|e| vec![e]).collect())
    }

    /// The one-block partition 𝟏 of [n].
    pub fn single_block(n: usize) -> Result<Self> {
        Self::new(n, vec![(1..=n).collect()])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block sizes in canonical block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Index of the block containing `element`.
    pub fn block_of(&self, element: usize) -> Result<usize> {
        if element == 0 || element > self.n {
            return Err(Error::InvalidArgument(format!(
                "element {element} outside ground set [{}]",
                self.n
            )));
        }
        Ok(self
            .blocks
            .iter()
            .position(|b| b.binary_search(&element).is_ok())
            .expect("canonical partition covers ground set"))
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// Restriction to {1,…,m}.
    pub fn restrict(&self, m: usize) -> Result<SetPartition> {
        if m == 0 || m > self.n {
            return Err(Error::InvalidArgument(format!(
                "restriction size {m} not in 1..={}",
                self.n
            )));
        }
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().take_while(|&e| e <= m).collect())
            .filter(|b: &Vec<usize>| !b.is_empty())
            .collect();
        SetPartition::new(m, blocks)
    }

    /// Fragments each block by its splitter. Splitter i partitions a ground
    /// set of at least |block i| elements and acts through the increasing
    /// bijection from the block onto {1,…,|block i|}.
    pub fn frag(&self, splitters: &[SetPartition]) -> Result<SetPartition> {
        if splitters.len() != self.blocks.len() {
            return Err(Error::InvalidArgument(format!(
                "{} splitters for {} blocks",
                splitters.len(),
                self.blocks.len()
            )));
        }
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (block, splitter) in self.blocks.iter().zip(splitters) {
            if splitter.n() < block.len() {
                return Err(Error::InvalidArgument(format!(
                    "splitter on [{}] smaller than block of size {}",
                    splitter.n(),
                    block.len()
                )));
            }
            let local = if splitter.n() == block.len() {
                splitter.clone()
            } else {
                splitter.restrict(block.len())?
            };
            for sub in local.blocks() {
                out.push(sub.iter().map(|&j| block[j - 1]).collect());
            }
        }
        SetPartition::new(self.n, out)
    }

    /// Exact block frequencies |block|/n in canonical block order.
    pub fn block_frequencies(&self) -> Vec<Ratio<u64>> {
        self.blocks
            .iter()
            .map(|b| Ratio::new(b.len() as u64, self.n as u64))
            .collect()
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &SetPartition) -> bool {
        if self.n != coarser.n {
            return false;
        }
        self.blocks.iter().all(|b| {
            let target = coarser.block_of(b[0]).expect("element in range");
            b.iter()
                .all(|&e| coarser.block_of(e).expect("element in range") == target)
        })
    }

    /// Restricted-growth labels: element i+1 maps to the index of its block.
    pub fn growth_string(&self) -> Vec<usize> {
        let mut labels = vec![0usize; self.n];
        for (j, block) in self.blocks.iter().enumerate() {
            for &e in block {
                labels[e - 1] = j;
            }
        }
        labels
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            write!(f, "{{")?;
            for (i, e) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<usize>>> for SetPartition {
    type Error = Error;
    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        SetPartition::from_blocks(blocks)
    }
}

impl From<SetPartition> for Vec<Vec<usize>> {
    fn from(p: SetPartition) -> Self {
        p.blocks
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(blocks: &[&[usize]]) -> SetPartition {
        SetPartition::from_blocks(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn canonicalizes_block_and_element_order() {
        let p = SetPartition::new(4, vec![vec![3, 1], vec![4, 2]]).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 3], vec![2, 4]]);
        assert_eq!(format!("{p}"), "{1,3}{2,4}");
    }

    #[test]
    fn rejects_malformed_blocks() {
        assert!(SetPartition::new(3, vec![vec![1, 2]]).is_err());
        assert!(SetPartition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(SetPartition::new(3, vec![vec![1, 2, 3], vec![]]).is_err());
        assert!(SetPartition::new(2, vec![vec![1, 2, 3]]).is_err());
        assert!(SetPartition::new(0, vec![]).is_err());
    }

    #[test]
    fn restriction_drops_high_elements() {
        let p = sp(&[&[1, 3], &[2], &[4]]);
        assert_eq!(p.restrict(3).unwrap(), sp(&[&[1, 3], &[2]]));
        assert_eq!(p.restrict(2).unwrap(), sp(&[&[1], &[2]]));
        assert!(p.restrict(0).is_err());
        assert!(p.restrict(5).is_err());
    }

    #[test]
    fn frag_acts_through_increasing_bijection() {
        let p = sp(&[&[1, 3], &[2]]);
        let split = p
            .frag(&[sp(&[&[1], &[2]]), sp(&[&[1]])])
            .unwrap();
        assert_eq!(split, sp(&[&[1], &[2], &[3]]));
    }

    #[test]
    fn frag_accepts_larger_splitter_ground_set() {
        // Splitters pair with blocks in canonical order: the first splits
        // {1,3,4} through the bijection 1->1, 2->3, 3->4, the second acts on
        // {2,5} by restriction to [2].
        let p = sp(&[&[2, 5], &[1, 3, 4]]);
        let s1 = sp(&[&[1, 3], &[2]]);
        let s2 = sp(&[&[1, 2], &[3]]);
        let split = p.frag(&[s1, s2]).unwrap();
        assert_eq!(split, sp(&[&[1, 4], &[2, 5], &[3]]));
        assert!(split.refines(&p));
    }

    #[test]
    fn frag_rejects_undersized_splitter() {
        let p = sp(&[&[1, 2, 3]]);
        assert!(p.frag(&[sp(&[&[1, 2]])]).is_err());
        assert!(p.frag(&[]).is_err());
    }

    #[test]
    fn frequencies_are_exact_rationals_summing_to_one() {
        let p = sp(&[&[1, 3, 5], &[2], &[4, 6, 7]]);
        let freqs = p.block_frequencies();
        assert_eq!(freqs[0], Ratio::new(3, 7));
        let total: Ratio<u64> = freqs.into_iter().sum();
        assert_eq!(total, Ratio::new(1, 1));
    }

    #[test]
    fn refinement_ordering() {
        let fine = sp(&[&[1], &[2], &[3, 4]]);
        let coarse = sp(&[&[1, 2], &[3, 4]]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        assert!(fine.refines(&SetPartition::single_block(4).unwrap()));
        assert!(SetPartition::singletons(4).unwrap().refines(&fine));
    }

    #[test]
    fn json_round_trip_is_list_of_lists() {
        let p = sp(&[&[1, 3], &[2]]);
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, "[[1,3],[2]]");
        let back: SetPartition = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<SetPartition>("[[1,3],[3]]").is_err());
    }

    #[test]
    fn assignments_round_trip() {
        let p = sp(&[&[1, 4], &[2], &[3]]);
        let labels = p.growth_string();
        assert_eq!(labels, vec![0, 1, 2, 0]);
        assert_eq!(SetPartition::from_assignments(&labels).unwrap(), p);
    }
}
