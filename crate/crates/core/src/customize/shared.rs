//! Shared mutable slices for task-parallel customization and the task tree
//! traversals over the separator decomposition.

use std::marker::PhantomData;

use rayon::prelude::*;

use crate::decomposition::SeparatorDecomposition;
use crate::graph::NodeId;

/// A slice that several tasks may write concurrently, provided no two tasks
/// ever touch the same index while one of them writes it.
#[derive(Clone, Copy)]
pub(crate) struct UnsafeSlice<'a, T> {
    ptr: *mut T,
    len: usize,
    _borrow: PhantomData<&'a mut [T]>,
}

unsafe impl<T: Send> Send for UnsafeSlice<'_, T> {}
unsafe impl<T: Send> Sync for UnsafeSlice<'_, T> {}

impl<'a, T: Copy> UnsafeSlice<'a, T> {
    pub fn new(slice: &'a mut [T]) -> Self {
        UnsafeSlice { ptr: slice.as_mut_ptr(), len: slice.len(), _borrow: PhantomData }
    }

    /// # Safety
    /// No other task may write index `i` concurrently.
    #[inline(always)]
    pub unsafe fn get(&self, i: usize) -> T {
        debug_assert!(i < self.len);
        *self.ptr.add(i)
    }

    /// # Safety
    /// No other task may access index `i` concurrently.
    #[inline(always)]
    pub unsafe fn set(&self, i: usize, v: T) {
        debug_assert!(i < self.len);
        *self.ptr.add(i) = v;
    }
}

/// Children before separators; cells below `threshold` vertices run as one
/// sequential ascending sweep.
pub(crate) fn bottom_up<F>(d: &SeparatorDecomposition, node: u32, threshold: usize, f: &F)
where
    F: Fn(NodeId) + Sync,
{
    let node = d.node(node);
    if node.cell.len() < threshold {
        node.cell.clone().for_each(f);
        return;
    }
    node.children.par_iter().for_each(|&c| bottom_up(d, c, threshold, f));
    node.separator.clone().for_each(f);
}

/// Separators (descending) before children; cells below `threshold` run as
/// one sequential descending sweep.
pub(crate) fn top_down<F>(d: &SeparatorDecomposition, node: u32, threshold: usize, f: &F)
where
    F: Fn(NodeId) + Sync,
{
    let node = d.node(node);
    if node.cell.len() < threshold {
        node.cell.clone().rev().for_each(f);
        return;
    }
    node.separator.clone().rev().for_each(f);
    node.children.par_iter().for_each(|&c| top_down(d, c, threshold, f));
}

/// Runs `f` on a dedicated pool with `threads` workers.
pub(crate) fn with_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::SeparatorNode;
    use std::sync::Mutex;

    fn sample() -> SeparatorDecomposition {
        SeparatorDecomposition::from_preorder(vec![
            SeparatorNode { cell: 0..5, separator: 4..5, children: vec![1, 2] },
            SeparatorNode { cell: 0..2, separator: 0..2, children: vec![] },
            SeparatorNode { cell: 2..4, separator: 2..4, children: vec![] },
        ])
    }

    #[test]
    fn traversal_respects_dependencies() {
        let d = sample();
        for threshold in [0, 3, 10] {
            let seen = Mutex::new(Vec::new());
            with_pool(4, || bottom_up(&d, 0, threshold, &|v| seen.lock().unwrap().push(v)));
            let seen = seen.into_inner().unwrap();
            assert_eq!(seen.len(), 5);
            assert_eq!(*seen.last().unwrap(), 4);

            let seen = Mutex::new(Vec::new());
            with_pool(4, || top_down(&d, 0, threshold, &|v| seen.lock().unwrap().push(v)));
            let seen = seen.into_inner().unwrap();
            assert_eq!(seen[0], 4);
            let pos = |v| seen.iter().position(|&x| x == v).unwrap();
            assert!(pos(1) < pos(0) && pos(3) < pos(2));
        }
    }
}
