//! The randomized distributed augmentation protocol.
//!
//! A round is simulated mini-slot by mini-slot: seeds start walks in the
//! first mini-slot, walks grow by request/acknowledge exchanges during the
//! next `2k` mini-slots, each terminus checks whether its walk closes into a
//! cycle, and the augment/keep decision is applied atomically.

mod augmentation;
mod bound;
mod decider;
mod gain;
mod protocol;

pub use augmentation::{apply_augmentations, augmentation_gain, AugmentError, Augmentation, SplitGain};
pub use bound::delta_lower_bound;
pub use decider::{Decider, Scripted, SlotStreams};
pub use gain::{GainModel, IndexGain, LinkView, NormalizedGain};
pub use protocol::{check_cycle, run_augmentation_round, run_augmentation_round_distributed, RoundConfig, RoundResult};
