use serde::Serialize;

use super::CompletionStep;

/// Flat, string-valued form of a [`CompletionStep`] for export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub t: u64,
    pub k_prime: i64,
    pub k: u64,
    pub m: String,
    pub old_length: String,
    pub offset_numerator: String,
    pub offset_exponent: u64,
    pub log_gap_lo: String,
    pub log_gap_hi: String,
}

impl From<&CompletionStep> for TraceRecord {
    fn from(s: &CompletionStep) -> Self {
        TraceRecord {
            t: s.t,
            k_prime: s.k_prime,
            k: s.k,
            m: s.m.to_string(),
            old_length: s.old_length.to_string(),
            offset_numerator: s.offset.numerator().to_string(),
            offset_exponent: s.offset.exponent(),
            log_gap_lo: s.log_gap.lo().to_string(),
            log_gap_hi: s.log_gap.hi().to_string(),
        }
    }
}

pub fn trace_records(steps: &[CompletionStep]) -> Vec<TraceRecord> {
    steps.iter().map(TraceRecord::from).collect()
}

/// One line per step: `t k m old_length offset_numerator offset_exponent`,
/// after a `#` header line.
pub fn export_text(steps: &[CompletionStep]) -> String {
    let mut out = String::from("# t k m old_length offset_numerator offset_exponent\n");
    for s in steps {
        out.push_str(&format!(
            "{} {} {} {} {} {}\n",
            s.t,
            s.k,
            s.m,
            s.old_length,
            s.offset.numerator(),
            s.offset.exponent()
        ));
    }
    out
}
