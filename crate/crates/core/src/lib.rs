//! Storage-capacity toolkit for quantum memories protected by LDPC codes.

pub mod bounds;
pub mod classical;
pub mod codes;
pub mod decoder_time;
pub mod entropy;
pub mod envelope;
pub mod gf2;
pub mod model;
pub mod normal;
pub mod reproduce;
pub mod search;
pub mod sim;
