//! Joint UCB learning and augmentation-based link scheduling for multi-hop
//! wireless networks under the primary interference model.

pub mod net;
pub mod rng;
pub mod augment;
pub mod bandit;
pub mod harness;
pub mod metrics;
pub mod oracle;
pub mod sched;
pub mod traffic;
