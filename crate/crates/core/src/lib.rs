//! Tunnelling times for one-dimensional piecewise-constant potentials.
//!
//! Units throughout are eV, Å and s unless a type says otherwise.

pub mod cli;
pub mod error;
pub mod optical;
pub mod packet;
pub mod potential;
pub mod quadrature;
pub mod scattering;
pub mod times;
pub mod units;
pub mod wavepacket;

pub use error::{Error, Result};
pub use packet::SpectralPacket;
pub use potential::PiecewisePotential;
pub use scattering::{closed_form_square, solve_transfer_matrix, ScatteringState, SquareBarrierParams};
pub use times::{time_report, TimeReport};
pub use units::UnitSystem;
pub use wavepacket::PacketField;
