//! Core engine for a Turing-complete extension of first-order logic.
//!
//! The logic adds three things to FO: insertion of fresh points into the
//! domain (`new x`), insertion/deletion of tuples into relations and
//! relation variables (`ins`/`del`), and recursive looping through labeled
//! subformulas (`#k{..}` with jump atoms `#k`). Formulas are evaluated by
//! playing a two-player semantic game; a formula can come out proven true,
//! proven false, or neither (the game may go on forever).
//!
//! This crate is `no_std`-compatible (`--no-default-features`, requires
//! `alloc`); the `std` feature only adds wall-clock timing to search stats
//! and `std::error::Error` impls.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ast;
pub mod game;
pub mod quantifier;
pub mod solver;
pub mod structure;
pub mod tm;
