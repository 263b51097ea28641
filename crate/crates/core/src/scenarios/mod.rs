//! Builders for the worked applications.

pub mod bb84;
pub mod bell;
