//! Monomial orders: block orders built from lex, degree-lex and
//! degree-reverse-lex base orders.
//!
//! An order is specified against a fixed slot layout: a monomial is a flat
//! exponent slice of length `width`, and the blocks partition `0..width`.
//! Earlier blocks dominate later ones, so any exponent weight in block `i`
//! outranks everything in blocks `> i` regardless of degrees. Within a
//! block, variables are listed by descending priority.
//!
//! All three base orders are degree-compatible within their block and admit
//! `1` as the least monomial, so every spec built here is admissible: a
//! total well-order compatible with monomial multiplication.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseOrder {
    Lex,
    DegLex,
    DegRevLex,
}

/// One block of a block order: slot indices in descending priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub vars: Vec<usize>,
    pub base: BaseOrder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrderSpec {
    width: usize,
    blocks: Vec<Block>,
}

impl MonomialOrderSpec {
    /// Validates that the blocks partition `0..width` exactly.
    pub fn new(width: usize, blocks: Vec<Block>) -> Result<Self> {
        let mut seen = vec![false; width];
        for b in &blocks {
            if b.vars.is_empty() {
                return Err(Error::precondition("empty order block"));
            }
            for &v in &b.vars {
                if v >= width {
                    return Err(Error::precondition(format!(
                        "order block slot {v} out of range for width {width}"
                    )));
                }
                if seen[v] {
                    return Err(Error::precondition(format!(
                        "slot {v} occurs in more than one order block"
                    )));
                }
                seen[v] = true;
            }
        }
        if let Some(miss) = seen.iter().position(|s| !s) {
            return Err(Error::precondition(format!(
                "slot {miss} not covered by any order block"
            )));
        }
        Ok(MonomialOrderSpec { width, blocks })
    }

    /// Degree-lex over all slots, priority `0 > 1 > ...`.
    pub fn deglex(width: usize) -> Self {
        MonomialOrderSpec::new(
            width,
            vec![Block {
                vars: (0..width).collect(),
                base: BaseOrder::DegLex,
            }],
        )
        .expect("single full block is a partition")
    }

    /// Single block with an explicit priority sequence.
    pub fn single_block(width: usize, base: BaseOrder, priority: Vec<usize>) -> Result<Self> {
        MonomialOrderSpec::new(
            width,
            vec![Block {
                vars: priority,
                base,
            }],
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Compares two exponent slices of length `width`.
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), self.width);
        debug_assert_eq!(b.len(), self.width);
        for block in &self.blocks {
            let ord = cmp_block(block, a, b);
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }

    /// True when every slot marked `true` in `elim` outranks every unmarked
    /// slot: the eliminated slots fill a prefix of the block sequence.
    ///
    /// A basis computed under such an order intersected with the kept
    /// subring generates the intersection ideal.
    pub fn is_elimination_for(&self, elim: &[bool]) -> bool {
        if elim.len() != self.width {
            return false;
        }
        if elim.iter().all(|e| !*e) {
            return true;
        }
        let mut keep_seen = false;
        for block in &self.blocks {
            let any_elim = block.vars.iter().any(|&v| elim[v]);
            let any_keep = block.vars.iter().any(|&v| !elim[v]);
            if any_elim && any_keep {
                return false;
            }
            if any_keep {
                keep_seen = true;
            } else if keep_seen {
                // an elimination block after a kept block
                return false;
            }
        }
        true
    }
}

fn block_degree(block: &Block, m: &[u32]) -> u64 {
    block.vars.iter().map(|&v| m[v] as u64).sum()
}

fn cmp_block(block: &Block, a: &[u32], b: &[u32]) -> Ordering {
    match block.base {
        BaseOrder::Lex => {
            for &v in &block.vars {
                match a[v].cmp(&b[v]) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        }
        BaseOrder::DegLex => {
            match block_degree(block, a).cmp(&block_degree(block, b)) {
                Ordering::Equal => {}
                other => return other,
            }
            for &v in &block.vars {
                match a[v].cmp(&b[v]) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        }
        BaseOrder::DegRevLex => {
            match block_degree(block, a).cmp(&block_degree(block, b)) {
                Ordering::Equal => {}
                other => return other,
            }
            // equal degree: smaller exponent in the least-priority slot wins
            for &v in block.vars.iter().rev() {
                match a[v].cmp(&b[v]) {
                    Ordering::Equal => continue,
                    other => return other.reverse(),
                }
            }
            Ordering::Equal
        }
    }
}
