//! Pure transforms and classifiers for turning binary files into images.
//!
//! The crate is `no_std` with `alloc`. Everything here operates on in-memory
//! buffers; reading files, writing PNGs and the model file format live in the
//! `hitviz` companion crate.
//!
//! Pipeline: bytes → [`entropy`] profile → [`colorize`] pixels → [`imaging`]
//! layout/resize → classifier ([`nn`] CTN, [`gist`] + kNN, raw bytes + SVM).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baselines;
pub mod colorize;
pub mod dataset;
pub mod entropy;
pub mod error;
pub mod gist;
pub mod hilbert;
pub mod imaging;
pub mod metrics;
pub mod nn;
pub mod rng;

pub use error::{Error, Result};
