//! Execution helpers for the data-parallel inner loops.
//!
//! With the default `parallel` feature the hot loops fan out over rayon;
//! without it the same entry points run the sequential fallback. The
//! `*_seq` variants are always available so benchmarks can compare both
//! paths in one binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_indexed_seq<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync) -> Vec<U> {
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indexed<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    map_indexed_seq(n, f)
}

pub fn map_slice_seq<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    map_slice_seq(items, f)
}

pub const PARALLEL: bool = cfg!(feature = "parallel");
