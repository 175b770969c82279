//! Linked representations: `NoCacheList`, `LinkedList` and `SingleList`.
//!
//! Every cell is its own heap allocation, as in a textbook linked list.
//! Cells are reached through raw `NonNull` handles owned by the list.

mod cached;
mod nocache;
mod single;

pub use cached::LinkedList;
pub use nocache::NoCacheList;
pub use single::SingleList;

use std::alloc::{alloc, dealloc, Layout};
use std::ptr::NonNull;

use crate::sequence::{Element, SeqError};

/// Allocates one cell, reporting allocation failure instead of aborting.
fn alloc_cell<T>(cell: T) -> Result<NonNull<T>, SeqError> {
    let layout = Layout::new::<T>();
    // SAFETY: `T` is a non-zero-sized cell type.
    let raw = unsafe { alloc(layout) } as *mut T;
    let ptr = NonNull::new(raw).ok_or(SeqError::Alloc)?;
    // SAFETY: freshly allocated with the layout of `T`.
    unsafe { ptr.as_ptr().write(cell) };
    Ok(ptr)
}

/// Frees a cell allocated by [`alloc_cell`] and returns its contents.
///
/// # Safety
/// `ptr` must come from `alloc_cell::<T>` and not have been freed.
unsafe fn free_cell<T>(ptr: NonNull<T>) -> T {
    let cell = ptr.as_ptr().read();
    dealloc(ptr.as_ptr() as *mut u8, Layout::new::<T>());
    cell
}

pub(crate) struct DoublyLink {
    value: Element,
    prev: Option<NonNull<DoublyLink>>,
    next: Option<NonNull<DoublyLink>>,
}

/// Words per doubly linked cell: value, prev, next.
pub const DOUBLY_LINK_WORDS: usize = 3;
/// Words per singly linked cell: value, next.
pub const SINGLY_LINK_WORDS: usize = 2;

/// The doubly linked chain shared by `NoCacheList` and `LinkedList`.
pub(crate) struct DoublyChain {
    first: Option<NonNull<DoublyLink>>,
    last: Option<NonNull<DoublyLink>>,
    size: usize,
}

impl DoublyChain {
    pub(crate) const fn new() -> Self {
        Self {
            first: None,
            last: None,
            size: 0,
        }
    }

    #[inline]
    pub(crate) fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub(crate) fn first(&self) -> NonNull<DoublyLink> {
        self.first.expect("non-empty chain")
    }

    #[inline]
    pub(crate) fn last(&self) -> NonNull<DoublyLink> {
        self.last.expect("non-empty chain")
    }

    #[inline]
    pub(crate) fn value(link: NonNull<DoublyLink>) -> Element {
        // SAFETY: handles given out by the chain point at live cells.
        unsafe { (*link.as_ptr()).value }
    }

    #[inline]
    pub(crate) fn next(link: NonNull<DoublyLink>) -> Option<NonNull<DoublyLink>> {
        // SAFETY: as above.
        unsafe { (*link.as_ptr()).next }
    }

    #[inline]
    pub(crate) fn prev(link: NonNull<DoublyLink>) -> Option<NonNull<DoublyLink>> {
        // SAFETY: as above.
        unsafe { (*link.as_ptr()).prev }
    }

    #[inline]
    pub(crate) fn forward(mut link: NonNull<DoublyLink>, steps: usize) -> NonNull<DoublyLink> {
        for _ in 0..steps {
            link = Self::next(link).expect("walk stays inside the chain");
        }
        link
    }

    #[inline]
    pub(crate) fn backward(mut link: NonNull<DoublyLink>, steps: usize) -> NonNull<DoublyLink> {
        for _ in 0..steps {
            link = Self::prev(link).expect("walk stays inside the chain");
        }
        link
    }

    pub(crate) fn push_back(&mut self, value: Element) -> Result<NonNull<DoublyLink>, SeqError> {
        let cell = alloc_cell(DoublyLink {
            value,
            prev: self.last,
            next: None,
        })?;
        match self.last {
            // SAFETY: live cell owned by this chain.
            Some(last) => unsafe { (*last.as_ptr()).next = Some(cell) },
            None => self.first = Some(cell),
        }
        self.last = Some(cell);
        self.size += 1;
        Ok(cell)
    }

    /// Links a new cell in front of `at`.
    pub(crate) fn link_before(
        &mut self,
        at: NonNull<DoublyLink>,
        value: Element,
    ) -> Result<NonNull<DoublyLink>, SeqError> {
        let prev = Self::prev(at);
        let cell = alloc_cell(DoublyLink {
            value,
            prev,
            next: Some(at),
        })?;
        // SAFETY: `at` and `prev` are live cells of this chain.
        unsafe {
            (*at.as_ptr()).prev = Some(cell);
            match prev {
                Some(p) => (*p.as_ptr()).next = Some(cell),
                None => self.first = Some(cell),
            }
        }
        self.size += 1;
        Ok(cell)
    }

    /// Unlinks and frees `link`, returning its value and former neighbours.
    pub(crate) fn unlink(
        &mut self,
        link: NonNull<DoublyLink>,
    ) -> (
        Element,
        Option<NonNull<DoublyLink>>,
        Option<NonNull<DoublyLink>>,
    ) {
        // SAFETY: `link` is a live cell of this chain; it is freed exactly once.
        let cell = unsafe { free_cell(link) };
        unsafe {
            match cell.prev {
                Some(p) => (*p.as_ptr()).next = cell.next,
                None => self.first = cell.next,
            }
            match cell.next {
                Some(n) => (*n.as_ptr()).prev = cell.prev,
                None => self.last = cell.prev,
            }
        }
        self.size -= 1;
        (cell.value, cell.prev, cell.next)
    }

    pub(crate) fn to_vec(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.size);
        let mut cur = self.first;
        while let Some(link) = cur {
            out.push(Self::value(link));
            cur = Self::next(link);
        }
        out
    }

    /// Checks prev/next reciprocity, end handles and the size cache.
    pub(crate) fn check(&self) -> Result<(), String> {
        let mut count = 0;
        let mut prev: Option<NonNull<DoublyLink>> = None;
        let mut cur = self.first;
        while let Some(link) = cur {
            if Self::prev(link) != prev {
                return Err(format!("prev handle of cell {count} does not point back"));
            }
            count += 1;
            prev = Some(link);
            cur = Self::next(link);
        }
        if self.last != prev {
            return Err("last handle is not the chain tail".into());
        }
        if count != self.size {
            return Err(format!("size cache {} but chain holds {count}", self.size));
        }
        Ok(())
    }

    /// Position of `target` in the chain, if present.
    pub(crate) fn position_of(&self, target: NonNull<DoublyLink>) -> Option<usize> {
        let mut cur = self.first;
        let mut idx = 0;
        while let Some(link) = cur {
            if link == target {
                return Some(idx);
            }
            idx += 1;
            cur = Self::next(link);
        }
        None
    }
}

// SAFETY: the chain exclusively owns every cell reachable from it.
unsafe impl Send for DoublyChain {}

impl Drop for DoublyChain {
    fn drop(&mut self) {
        let mut cur = self.first.take();
        while let Some(link) = cur {
            // SAFETY: each cell is visited and freed once.
            cur = unsafe { free_cell(link) }.next;
        }
        self.last = None;
    }
}
