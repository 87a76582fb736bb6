//! File formats, deterministic parallel sweeps and report types behind the
//! `pplab` command-line tool.

pub mod formats;
pub mod sweep;
