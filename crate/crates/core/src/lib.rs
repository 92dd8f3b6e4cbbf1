//! Exact analysis, construction and simulation of polar codes decoded by
//! min-sum successive cancellation over binary-input memoryless symmetric
//! channels with integer labelers.

pub mod channels;
pub mod decoder;
pub mod format;
pub mod posynomial;
pub mod synthesis;
pub mod thresholds;
