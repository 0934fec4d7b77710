#![cfg_attr(test, allow(clippy::needless_range_loop, clippy::excessive_precision))]
pub mod detection;
pub mod error;
pub mod metrics;
pub mod network;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod sweep;
pub mod twophoton;
pub mod wavepacket;
