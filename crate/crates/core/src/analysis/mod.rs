//! Transfer and revival predicates, fidelity scans, and cycle checks.

mod certificate;
mod cycle;
mod scan;

pub use certificate::{
    fr_predict, pst_predict, resolve_ratio, theta_class, theta_value, FrCertificate,
    FrPrediction, HalfInt, PredictedTime, PstCase, PstCertificate, PstPrediction, RatioSource,
    Refusal, ThetaClass, TimeScale, Violation,
};
pub use cycle::{cycle_verify, CycleReport, PhaseCheck, PhaseKind};
pub use scan::{fidelity_scan, FidelitySeries, CSV_HEADER};
