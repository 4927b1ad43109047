//! Fixtures shared by the benchmarks in benches/.

use hermdens::oracle::{build_s_r, counting_precision};
use hermdens::{CanonicalForm, CountJob, FieldParams, SType};

/// A single-threaded counting job for S = Split against a diagonal target.
pub fn count_job(p: u64, t: CanonicalForm, ell: u32) -> CountJob {
    let params = FieldParams::new(p).expect("odd prime");
    let prec = counting_precision(params, ell);
    let s = build_s_r(params, SType::Split, 0, prec).expect("unimodular S");
    let t = t.representative(params, prec).expect("representable T");
    CountJob::new(s, t, ell).with_threads(1)
}
