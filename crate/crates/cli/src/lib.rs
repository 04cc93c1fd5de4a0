//! Front end for the `b0` command: presentation files, group expressions,
//! commands and the result cache.

pub mod cache;
pub mod commands;
pub mod dsl;
pub mod expr;
pub mod record;
