//! `ArrayBlock`: a circular primary table of fixed-size circular blocks.
//!
//! User order is the concatenation of the blocks in primary order. Each
//! block is a ring of `block_capacity` slots, and the primary table is itself
//! a ring of block handles, so both levels shift toward whichever end is
//! nearer. An index cache remembers the last block accessed and the user
//! index of its first element.
//!
//! Insert and remove policy:
//!
//! * a block with free space takes the element with an in-block shift;
//! * an insert landing on a full block goes to the end of the preceding
//!   block when the position is that block's first slot and the predecessor
//!   has room, or into a fresh block when the position is the very front or
//!   very back of the sequence;
//! * otherwise the full block splits in half, the new element being woven
//!   into the half that is copied out, so a split costs exactly
//!   `block_capacity / 2` element moves;
//! * a removal that empties a block drops it from the primary table;
//! * after a removal, a block and its successor (its predecessor, for the
//!   last block) merge when they jointly hold at most two thirds of a block,
//!   the smaller one being copied into the larger.
//!
//! Slot relocation done while growing the primary table is not counted in
//! [`Counters::primary_moves`].

use thiserror::Error;

use crate::ring;
use crate::sequence::{
    check_index, check_insert_index, Counters, Element, SeqError, Sequence, WORD_BYTES,
};

pub const DEFAULT_BLOCK_CAPACITY: usize = 2048;
pub const MIN_BLOCK_CAPACITY: usize = 4;
pub const MAX_BLOCK_CAPACITY: usize = 1 << 16;
pub const MIN_PRIMARY_CAPACITY: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("block capacity {0} must be a power of two between 4 and 65536")]
pub struct BlockCapacityError(pub usize);

pub fn validate_block_capacity(capacity: usize) -> Result<(), BlockCapacityError> {
    if capacity.is_power_of_two() && (MIN_BLOCK_CAPACITY..=MAX_BLOCK_CAPACITY).contains(&capacity) {
        Ok(())
    } else {
        Err(BlockCapacityError(capacity))
    }
}

#[derive(Debug)]
struct Block {
    data: Box<[Element]>,
    lower: usize,
    count: usize,
}

impl Block {
    fn new(capacity: usize) -> Result<Self, SeqError> {
        let mut v: Vec<Element> = Vec::new();
        v.try_reserve_exact(capacity).map_err(|_| SeqError::Alloc)?;
        v.resize(capacity, 0);
        Ok(Self {
            data: v.into_boxed_slice(),
            lower: capacity / 3,
            count: 0,
        })
    }

    #[inline]
    fn capacity(&self) -> usize {
        self.data.len()
    }

    #[inline]
    fn is_full(&self) -> bool {
        self.count == self.data.len()
    }

    #[inline]
    fn slot(&self, off: usize) -> usize {
        ring::mask_index(self.lower, off, self.data.len())
    }

    #[inline]
    fn get(&self, off: usize) -> Element {
        self.data[self.slot(off)]
    }

    /// Inserts at `off`, shifting the shorter side. Returns element moves.
    fn insert(&mut self, off: usize, value: Element) -> usize {
        debug_assert!(!self.is_full() && off <= self.count);
        let moves = if off < self.count - off {
            ring::shift_left(&mut self.data, self.lower, 0, off);
            self.lower = ring::wrap_back(self.lower, 1, self.capacity());
            off
        } else {
            ring::shift_right(&mut self.data, self.lower, off, self.count - off);
            self.count - off
        };
        let slot = self.slot(off);
        self.data[slot] = value;
        self.count += 1;
        moves
    }

    /// Removes at `off`, shifting the shorter side. Returns the value and
    /// element moves.
    fn remove(&mut self, off: usize) -> (Element, usize) {
        debug_assert!(off < self.count);
        let value = self.get(off);
        let tail = self.count - 1 - off;
        let moves = if off < tail {
            ring::shift_right(&mut self.data, self.lower, 0, off);
            self.lower = ring::mask_index(self.lower, 1, self.capacity());
            off
        } else {
            ring::shift_left(&mut self.data, self.lower, off + 1, tail);
            tail
        };
        self.count -= 1;
        (value, moves)
    }
}

/// Two-level circular block array with a block-granularity index cache.
#[derive(Debug)]
pub struct ArrayBlock {
    /// Primary table; its length is the primary capacity (0 or a power of two).
    slots: Vec<Option<Block>>,
    lower: usize,
    block_count: usize,
    size: usize,
    block_capacity: usize,
    /// (block ordinal, user index of that block's first element)
    cache: Option<(usize, usize)>,
    counters: Counters,
}

impl Default for ArrayBlock {
    fn default() -> Self {
        Self::new()
    }
}

impl ArrayBlock {
    /// primary storage, primary capacity, primary lower, block count,
    /// cache prim, cache index, size, block capacity
    pub const HEADER_WORDS: usize = 8;
    /// Words per primary slot (one block handle).
    pub const SLOT_WORDS: usize = 1;
    /// Words per block record besides its storage: storage pointer, lower, count.
    pub const BLOCK_HEADER_WORDS: usize = 3;

    pub fn new() -> Self {
        Self::with_block_capacity(DEFAULT_BLOCK_CAPACITY).expect("default capacity is valid")
    }

    pub fn with_block_capacity(block_capacity: usize) -> Result<Self, BlockCapacityError> {
        validate_block_capacity(block_capacity)?;
        Ok(Self {
            slots: Vec::new(),
            lower: 0,
            block_count: 0,
            size: 0,
            block_capacity,
            cache: None,
            counters: Counters::default(),
        })
    }

    pub fn block_capacity(&self) -> usize {
        self.block_capacity
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn primary_capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn primary_lower(&self) -> usize {
        self.lower
    }

    /// `(block ordinal, user index of its first element)` held by the cache.
    pub fn cache(&self) -> Option<(usize, usize)> {
        self.cache
    }

    /// Element counts of the blocks in user order.
    pub fn block_counts(&self) -> Vec<usize> {
        (0..self.block_count)
            .map(|ord| self.block(ord).count)
            .collect()
    }

    #[inline]
    fn phys(&self, ord: usize) -> usize {
        ring::mask_index(self.lower, ord, self.slots.len())
    }

    #[inline]
    fn block(&self, ord: usize) -> &Block {
        self.slots[self.phys(ord)]
            .as_ref()
            .expect("occupied primary slot")
    }

    #[inline]
    fn block_mut(&mut self, ord: usize) -> &mut Block {
        let p = self.phys(ord);
        self.slots[p].as_mut().expect("occupied primary slot")
    }

    /// Finds the block holding `idx` (which must be below `size`), starting
    /// from the nearest of the front, the back and the cached block.
    /// Returns `(ordinal, offset, prefix)` and points the cache at the block.
    fn find(&mut self, idx: usize) -> (usize, usize, usize) {
        if let Some((cord, cprefix)) = self.cache {
            if idx >= cprefix && idx - cprefix < self.block(cord).count {
                self.counters.cache_hits += 1;
                return (cord, idx - cprefix, cprefix);
            }
        }
        let from_front = idx;
        let from_back = self.size - idx;
        let (mut ord, mut prefix) = match self.cache {
            Some((cord, cprefix)) if cprefix.abs_diff(idx) <= from_front.min(from_back) => {
                self.counters.cache_hits += 1;
                (cord, cprefix)
            }
            _ if from_front <= from_back => (0, 0),
            _ => (self.block_count, self.size),
        };
        let mut steps = 0u64;
        if prefix <= idx {
            loop {
                let count = self.block(ord).count;
                if idx < prefix + count {
                    break;
                }
                prefix += count;
                ord += 1;
                steps += 1;
            }
        } else {
            while prefix > idx {
                ord -= 1;
                prefix -= self.block(ord).count;
                steps += 1;
            }
        }
        self.counters.steps += steps;
        self.cache = Some((ord, prefix));
        (ord, idx - prefix, prefix)
    }

    /// Block ordinal and in-block offset of user index `idx`.
    pub fn locate_block(&mut self, idx: usize) -> Result<(usize, usize), SeqError> {
        check_index(idx, self.size)?;
        let (ord, off, _) = self.find(idx);
        Ok((ord, off))
    }

    /// Doubles the primary table (minimum 8 slots), relocating blocks so
    /// that ordinal 0 lands in slot 0.
    fn grow_primary(&mut self) -> Result<(), SeqError> {
        let capacity = (self.slots.len() * 2).max(MIN_PRIMARY_CAPACITY);
        let mut next: Vec<Option<Block>> = Vec::new();
        next.try_reserve_exact(capacity)
            .map_err(|_| SeqError::Alloc)?;
        for ord in 0..self.block_count {
            let p = self.phys(ord);
            next.push(self.slots[p].take());
        }
        next.resize_with(capacity, || None);
        self.slots = next;
        self.lower = 0;
        Ok(())
    }

    /// Places `block` at ordinal `ord`, shifting the shorter side of the
    /// primary table.
    fn insert_block(&mut self, ord: usize, block: Block) -> Result<(), SeqError> {
        if self.block_count == self.slots.len() {
            self.grow_primary()?;
        }
        let bc = self.block_count;
        if ord < bc - ord {
            for j in 0..ord {
                let (src, dst) = (
                    self.phys(j),
                    ring::wrap_back(self.phys(j), 1, self.slots.len()),
                );
                self.slots.swap(src, dst);
            }
            self.lower = ring::wrap_back(self.lower, 1, self.slots.len());
            self.counters.primary_moves += ord as u64;
        } else {
            for j in (ord..bc).rev() {
                let (src, dst) = (self.phys(j), self.phys(j + 1));
                self.slots.swap(src, dst);
            }
            self.counters.primary_moves += (bc - ord) as u64;
        }
        let p = self.phys(ord);
        debug_assert!(self.slots[p].is_none());
        self.slots[p] = Some(block);
        self.block_count += 1;
        Ok(())
    }

    /// Drops the block at ordinal `ord`, closing the gap from the shorter side.
    fn remove_block(&mut self, ord: usize) {
        let p = self.phys(ord);
        self.slots[p] = None;
        let bc = self.block_count;
        if ord < bc - 1 - ord {
            for j in (0..ord).rev() {
                let (src, dst) = (self.phys(j), self.phys(j + 1));
                self.slots.swap(src, dst);
            }
            self.lower = ring::mask_index(self.lower, 1, self.slots.len());
            self.counters.primary_moves += ord as u64;
        } else {
            for j in ord + 1..bc {
                let (src, dst) = (self.phys(j), self.phys(j - 1));
                self.slots.swap(src, dst);
            }
            self.counters.primary_moves += (bc - 1 - ord) as u64;
        }
        self.block_count -= 1;
    }

    fn new_block_with(&mut self, value: Element) -> Result<Block, SeqError> {
        let mut block = Block::new(self.block_capacity)?;
        block.insert(0, value);
        Ok(block)
    }

    /// Splits the full block at `ord` while inserting `value` at `off`.
    /// Returns the ordinal and prefix of the block that received `value`.
    fn split_insert(
        &mut self,
        ord: usize,
        off: usize,
        prefix: usize,
        value: Element,
    ) -> Result<(usize, usize), SeqError> {
        let cap = self.block_capacity;
        let half = cap / 2;
        let mut fresh = Block::new(cap)?;
        let old = self.block_mut(ord);
        debug_assert!(old.is_full());
        // The fresh block takes one half of the old block with `value` woven in.
        let (from, at) = if off < half {
            (0, off)
        } else {
            (half, off - half)
        };
        ring::copy_between(
            &old.data,
            old.lower,
            from,
            &mut fresh.data,
            fresh.lower,
            0,
            at,
        );
        let slot = fresh.slot(at);
        fresh.data[slot] = value;
        ring::copy_between(
            &old.data,
            old.lower,
            from + at,
            &mut fresh.data,
            fresh.lower,
            at + 1,
            half - at,
        );
        fresh.count = half + 1;
        old.count -= half;
        if off < half {
            old.lower = ring::mask_index(old.lower, half, cap);
        }
        self.counters.moves += half as u64;
        self.counters.splits += 1;
        if off < half {
            self.insert_block(ord, fresh)?;
            Ok((ord, prefix))
        } else {
            self.insert_block(ord + 1, fresh)?;
            Ok((ord + 1, prefix + half))
        }
    }

    /// Merges blocks `left` and `left + 1`, copying the smaller into the
    /// larger. The merged block ends up at ordinal `left`.
    fn merge_pair(&mut self, left: usize) {
        let (pl, pr) = (self.phys(left), self.phys(left + 1));
        let lc = self.block(left).count;
        let rc = self.block(left + 1).count;
        let cap = self.block_capacity;
        if lc <= rc {
            let src = self.slots[pl].take().expect("occupied primary slot");
            let dst = self.slots[pr].as_mut().expect("occupied primary slot");
            dst.lower = ring::wrap_back(dst.lower, lc, cap);
            ring::copy_between(&src.data, src.lower, 0, &mut dst.data, dst.lower, 0, lc);
            dst.count += lc;
            self.slots[pl] = Some(src);
            self.remove_block(left);
            self.counters.moves += lc as u64;
        } else {
            let src = self.slots[pr].take().expect("occupied primary slot");
            let dst = self.slots[pl].as_mut().expect("occupied primary slot");
            ring::copy_between(&src.data, src.lower, 0, &mut dst.data, dst.lower, lc, rc);
            dst.count += rc;
            self.slots[pr] = Some(src);
            self.remove_block(left + 1);
            self.counters.moves += rc as u64;
        }
        self.counters.merges += 1;
    }

    /// Verifies the structural invariants: block counts, slot occupancy,
    /// size and cache validity.
    pub fn check_invariants(&self) -> Result<(), String> {
        let cap = self.slots.len();
        if cap != 0 && !cap.is_power_of_two() {
            return Err(format!("primary capacity {cap} is not a power of two"));
        }
        if self.block_count > cap {
            return Err("more blocks than primary slots".into());
        }
        let mut total = 0;
        for ord in 0..self.block_count {
            let b = self.slots[self.phys(ord)]
                .as_ref()
                .ok_or(format!("empty slot at ordinal {ord}"))?;
            if b.count == 0 || b.count > self.block_capacity {
                return Err(format!("block {ord} holds {} elements", b.count));
            }
            total += b.count;
        }
        for ord in self.block_count..cap {
            if self.slots[self.phys(ord)].is_some() {
                return Err(format!(
                    "slot past the last block is occupied (ordinal {ord})"
                ));
            }
        }
        if total != self.size {
            return Err(format!("size {} but blocks hold {total}", self.size));
        }
        if let Some((cord, cprefix)) = self.cache {
            if cord >= self.block_count {
                return Err(format!("cache names block {cord} of {}", self.block_count));
            }
            let prefix: usize = (0..cord).map(|o| self.block(o).count).sum();
            if prefix != cprefix {
                return Err(format!(
                    "cache index {cprefix} but block {cord} starts at {prefix}"
                ));
            }
        }
        Ok(())
    }
}

impl Sequence for ArrayBlock {
    fn size(&self) -> usize {
        self.size
    }

    fn item(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.size)?;
        let (ord, off, _) = self.find(idx);
        Ok(self.block(ord).get(off))
    }

    fn insert(&mut self, idx: usize, value: Element) -> Result<(), SeqError> {
        check_insert_index(idx, self.size)?;
        if self.block_count == 0 {
            let block = self.new_block_with(value)?;
            self.insert_block(0, block)?;
            self.size = 1;
            self.cache = Some((0, 0));
            return Ok(());
        }
        let (ord, off, prefix) = if idx == self.size {
            let last = self.block_count - 1;
            let count = self.block(last).count;
            (last, count, self.size - count)
        } else {
            self.find(idx)
        };
        let cap = self.block_capacity;
        let target = if !self.block(ord).is_full() {
            let moves = self.block_mut(ord).insert(off, value);
            self.counters.moves += moves as u64;
            (ord, prefix)
        } else if off == 0 && ord > 0 && self.block(ord - 1).count < cap {
            let prev = self.block_mut(ord - 1);
            let prev_count = prev.count;
            prev.insert(prev_count, value);
            (ord - 1, prefix - prev_count)
        } else if off == cap {
            let block = self.new_block_with(value)?;
            self.insert_block(ord + 1, block)?;
            (ord + 1, prefix + cap)
        } else if off == 0 && ord == 0 {
            let block = self.new_block_with(value)?;
            self.insert_block(0, block)?;
            (0, 0)
        } else {
            self.split_insert(ord, off, prefix, value)?
        };
        self.size += 1;
        self.cache = Some(target);
        Ok(())
    }

    fn remove(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.size)?;
        let (ord, off, prefix) = self.find(idx);
        let (value, moves) = self.block_mut(ord).remove(off);
        self.counters.moves += moves as u64;
        self.size -= 1;
        let count = self.block(ord).count;
        if count == 0 {
            self.remove_block(ord);
            self.cache = if ord < self.block_count {
                Some((ord, prefix))
            } else if ord > 0 {
                Some((ord - 1, prefix - self.block(ord - 1).count))
            } else {
                None
            };
            return Ok(value);
        }
        let pair = if ord + 1 < self.block_count {
            Some((ord, prefix, self.block(ord + 1).count))
        } else if ord > 0 {
            let pc = self.block(ord - 1).count;
            Some((ord - 1, prefix - pc, pc))
        } else {
            None
        };
        self.cache = Some((ord, prefix));
        if let Some((left, left_prefix, other)) = pair {
            if 3 * (count + other) <= 2 * self.block_capacity {
                self.merge_pair(left);
                self.cache = Some((left, left_prefix));
            }
        }
        Ok(value)
    }

    fn footprint_bytes(&self) -> usize {
        let words = Self::HEADER_WORDS
            + Self::SLOT_WORDS * self.slots.len()
            + self.block_count * (Self::BLOCK_HEADER_WORDS + self.block_capacity);
        words * WORD_BYTES
    }

    fn to_vec(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.size);
        for ord in 0..self.block_count {
            let b = self.block(ord);
            ring::extend_from_ring(&mut out, &b.data, b.lower, b.count);
        }
        out
    }

    fn counters(&self) -> Counters {
        self.counters
    }

    fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }
}
