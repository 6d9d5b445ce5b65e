//! Plain-data residual reports, shared between library callers and the CLI's
//! JSON output. Field order is the serialization order.

use serde::{Deserialize, Serialize};

/// Default residual thresholds. Overridable through job configs.
pub mod thresholds {
    pub const COCYCLE: f64 = 1e-10;
    pub const GLUING: f64 = 1e-9;
    pub const TENSORIALITY: f64 = 1e-9;
    pub const IDEMPOTENCY: f64 = 1e-12;
    pub const TRACE: f64 = 1e-12;
    pub const CLOSEDNESS: f64 = 1e-8;
    pub const CHART_INDEPENDENCE: f64 = 1e-9;
    pub const ROUTE_AGREEMENT: f64 = 1e-6;
    pub const PARTITION_INDEPENDENCE: f64 = 1e-6;
    pub const INTEGRALITY: f64 = 1e-3;
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleReport {
    /// Max over triple-overlap sample points of |g_ki - g_kj g_ji|.
    pub max_cocycle_residual: f64,
    /// Max over overlap sample points of |g_ij g_ji - I|.
    pub max_inverse_residual: f64,
    /// Min over overlap sample points of |det g_ji|.
    pub min_det: f64,
    pub pair_points: usize,
    pub triple_points: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CohomologousReport {
    /// Max over overlap sample points of |h_ji - lambda_j^-1 g_ji lambda_i|.
    pub max_residual: f64,
    pub points: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GluingReport {
    /// Max overlap residual of Gamma_i = g_ij Gamma_j g_ji + g_ij d g_ji.
    pub max_residual: f64,
    pub points: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorialityReport {
    /// Max overlap residual of R_i = g_ij R_j g_ji.
    pub max_residual: f64,
    pub points: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectorReport {
    /// Max over sample points of |Q^2 - Q| (entrywise sup norm).
    pub max_idempotency_residual: f64,
    /// Max over sample points of |Trace Q - n|.
    pub max_trace_residual: f64,
    pub points: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChernFormChecks {
    /// Max over sample points of |d Ch_p| component values.
    pub closedness_residual: f64,
    /// Max overlap mismatch between chart representations of Ch_p.
    pub chart_independence_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionReport {
    pub max_sum_alpha_residual: f64,
    pub max_sum_beta_sq_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChernNumber {
    pub integral_re: f64,
    pub integral_im: f64,
    pub nearest_integer: i64,
    pub integrality_distance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// Max chart-independence residual over both partitions.
    pub chart_independence: f64,
    /// |integral(partition 1) - integral(partition 2)| when 2p = dim.
    pub integral_delta: Option<f64>,
    pub pass: bool,
}
