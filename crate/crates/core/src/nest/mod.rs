//! Marked points, nice intervals, first entry and return maps, the
//! principal nest, and finite-depth verifiers for the return structure of
//! Fibonacci maps.

mod domains;
mod dynamics;
mod interval;
mod marked;
mod principal;
pub mod verify;

pub use domains::{return_domains, DomainOptions, DomainSet, Enclosure, ReturnDomain};
pub use dynamics::{first_entry, is_nice, EntryResult, NiceReport};
pub use interval::{Interval, IntervalReport, Membership};
pub use marked::{marked_points, nearest_preimage_radii, MarkedPointTable, MarkedPoints};
pub use principal::{nest_level_budget, principal_nest, NestLevel, NestLevelReport};
