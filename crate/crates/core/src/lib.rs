#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod graph;
pub mod ffield;
pub mod sympoly;
pub mod counting;
pub mod classify;
