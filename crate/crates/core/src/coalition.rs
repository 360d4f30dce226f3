//! Players, coalitions as bitmasks, and partitions of a coalition.

use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on players for any bitmask-based structure.
pub const MAX_PLAYERS: usize = 64;

/// A 1-based player index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId(usize);

impl PlayerId {
    /// Checks `1 <= index <= players`.
    pub fn new(index: usize, players: usize) -> Result<Self> {
        if index == 0 || index > players {
            return Err(Error::InvalidPlayer {
                player: index,
                players,
            });
        }
        Ok(Self(index))
    }

    pub(crate) const fn unchecked(index: usize) -> Self {
        Self(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }

    /// Zero-based bit position.
    pub const fn bit(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of players; bit `i - 1` is set iff player `i` belongs to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_mask(mask: u64) -> Self {
        Self(mask)
    }

    /// `{1, ..., players}`.
    pub fn grand(players: usize) -> Self {
        debug_assert!(players <= MAX_PLAYERS);
        if players >= 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << players) - 1)
        }
    }

    /// Builds a coalition from 1-based player indices, validating each one.
    pub fn from_players(players: &[usize], n: usize) -> Result<Self> {
        players
            .iter()
            .try_fold(Self::EMPTY, |acc, &p| Ok(acc.with(PlayerId::new(p, n)?)))
    }

    pub fn singleton(player: PlayerId) -> Self {
        Self(1u64 << player.bit())
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, player: PlayerId) -> bool {
        self.0 >> player.bit() & 1 == 1
    }

    pub fn with(self, player: PlayerId) -> Self {
        Self(self.0 | 1u64 << player.bit())
    }

    pub fn without(self, player: PlayerId) -> Self {
        Self(self.0 & !(1u64 << player.bit()))
    }

    pub const fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub const fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Lowest-indexed member.
    pub fn first(self) -> Option<PlayerId> {
        (self.0 != 0).then(|| PlayerId(self.0.trailing_zeros() as usize + 1))
    }

    /// Members in ascending order.
    pub fn players(self) -> Players {
        Players(self.0)
    }

    pub fn indices(self) -> Vec<usize> {
        self.players().map(PlayerId::index).collect()
    }

    /// Whether `mask < 2^players`.
    pub fn fits(self, players: usize) -> bool {
        self.is_subset(Self::grand(players))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.players().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Ascending iterator over the members of a [`Coalition`].
#[derive(Debug, Clone)]
pub struct Players(u64);

impl Iterator for Players {
    type Item = PlayerId;

    fn next(&mut self) -> Option<PlayerId> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(PlayerId(bit + 1))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Players {}

/// Iterates every subset of `ground`, in increasing mask order.
pub fn subsets(ground: Coalition) -> impl Iterator<Item = Coalition> {
    let g = ground.mask();
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == g {
            None
        } else {
            Some((cur.wrapping_sub(g)) & g)
        };
        Some(Coalition(cur))
    })
}

/// Pairwise-disjoint, non-empty blocks covering `ground`.
///
/// Blocks are kept sorted by their lowest member so that two partitions
/// of the same set compare equal iff they have the same blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    ground: Coalition,
    blocks: Vec<Coalition>,
}

impl Partition {
    pub fn new(ground: Coalition, mut blocks: Vec<Coalition>) -> Result<Self> {
        blocks.sort_by_key(|b| b.mask().trailing_zeros());
        let partition = Self { ground, blocks };
        if !partition.is_valid() {
            return Err(Error::InvalidParameter(format!(
                "blocks do not partition {ground}"
            )));
        }
        Ok(partition)
    }

    /// Caller guarantees validity; checked in debug builds.
    pub(crate) fn from_sorted_blocks(ground: Coalition, blocks: Vec<Coalition>) -> Self {
        let partition = Self { ground, blocks };
        debug_assert!(partition.is_valid(), "invalid partition {partition:?}");
        partition
    }

    fn is_valid(&self) -> bool {
        let mut seen = Coalition::EMPTY;
        let mut last_min = None;
        for &b in &self.blocks {
            if b.is_empty() || !b.is_disjoint(seen) {
                return false;
            }
            let min = b.mask().trailing_zeros();
            if last_min.is_some_and(|m| m >= min) {
                return false;
            }
            last_min = Some(min);
            seen = seen.union(b);
        }
        seen == self.ground
    }

    pub fn ground(&self) -> Coalition {
        self.ground
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The block holding `player`, if the player is in the ground set.
    pub fn block_of(&self, player: PlayerId) -> Option<Coalition> {
        self.blocks.iter().copied().find(|b| b.contains(player))
    }

    /// Every block of `self` lies inside some block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.ground == coarser.ground
            && self
                .blocks
                .iter()
                .all(|b| coarser.blocks.iter().any(|c| b.is_subset(*c)))
    }

    /// Refines `coarser` and differs from it.
    pub fn strictly_refines(&self, coarser: &Partition) -> bool {
        self.refines(coarser) && self.blocks.len() > coarser.blocks.len()
    }

    pub fn to_indices(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.indices()).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(players: &[usize]) -> Coalition {
        Coalition::from_players(players, 8).unwrap()
    }

    #[test]
    fn player_bounds() {
        assert!(PlayerId::new(0, 3).is_err());
        assert!(PlayerId::new(4, 3).is_err());
        assert_eq!(PlayerId::new(3, 3).unwrap().bit(), 2);
    }

    #[test]
    fn coalition_basics() {
        let s = c(&[1, 3]);
        assert_eq!(s.mask(), 0b101);
        assert_eq!(s.indices(), vec![1, 3]);
        assert_eq!(s.to_string(), "{1,3}");
        assert!(s.is_subset(Coalition::grand(3)));
        assert!(!s.fits(2));
        assert_eq!(Coalition::grand(64).len(), 64);
        assert!(Coalition::from_players(&[9], 8).is_err());
    }

    #[test]
    fn subset_enumeration() {
        let all: Vec<u64> = subsets(c(&[1, 3, 4])).map(Coalition::mask).collect();
        assert_eq!(all, vec![0, 1, 4, 5, 8, 9, 12, 13]);
        assert_eq!(subsets(Coalition::EMPTY).count(), 1);
    }

    #[test]
    fn partition_refinement() {
        let ground = c(&[1, 2, 3, 4]);
        let coarse = Partition::new(ground, vec![c(&[3]), c(&[1, 2, 4])]).unwrap();
        let fine = Partition::new(ground, vec![c(&[1, 2]), c(&[3]), c(&[4])]).unwrap();
        assert!(fine.strictly_refines(&coarse));
        assert!(!coarse.refines(&fine));
        assert!(coarse.refines(&coarse));
        assert!(!coarse.strictly_refines(&coarse));
        assert_eq!(coarse.to_string(), "{{1,2,4},{3}}");
        assert!(Partition::new(ground, vec![c(&[1, 2]), c(&[2, 3, 4])]).is_err());
        assert!(Partition::new(ground, vec![c(&[1, 2])]).is_err());
    }
}
