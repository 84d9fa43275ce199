//! Random-parameter comparison of computed invariants with the closed forms.

use std::fmt::Write;

use genus2_core::catalog::{closed_form, graph_of_type, FiberTag, FiberType};
use genus2_core::format::NonArchDocument;
use genus2_core::invariants::nonarch_report;
use genus2_core::rational::ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Failure, OutputFormat, VerifyArgs, EXIT_INCONSISTENT, EXIT_MISMATCH};

const MAX_TERM: i64 = 1000;

struct Mismatch {
    fiber_type: FiberType,
    computed: NonArchDocument,
    expected: NonArchDocument,
}

/// The parameter tuples `verify` checks, reproducible from the seed.
pub fn sample_types(samples: usize, seed: u64) -> Vec<FiberType> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples * FiberTag::ALL.len());
    for tag in FiberTag::ALL {
        for _ in 0..samples {
            let params = (0..tag.arity())
                .map(|_| ratio(rng.gen_range(1..=MAX_TERM), rng.gen_range(1..=MAX_TERM)))
                .collect();
            out.push(FiberType::new(tag, params).expect("positive parameters"));
        }
    }
    out
}

pub fn run(a: &VerifyArgs, format: OutputFormat) -> Result<String, Failure> {
    let mut passed = [0usize; 7];
    let mut mismatches = Vec::new();
    for t in sample_types(a.samples, a.seed) {
        let g = graph_of_type(&t);
        let report = nonarch_report(&g).map_err(|e| Failure::new(EXIT_INCONSISTENT, format!("{t}: {e}")))?;
        let expected = closed_form(&t);
        let slot = FiberTag::ALL.iter().position(|&x| x == t.tag()).expect("known tag");
        if report.same_values(&expected) {
            passed[slot] += 1;
        } else {
            let label = Some(t.to_string());
            mismatches.push(Mismatch {
                fiber_type: t,
                computed: NonArchDocument { fiber_type: label.clone(), report },
                expected: NonArchDocument { fiber_type: label, report: expected },
            });
        }
    }
    let text = match format {
        OutputFormat::Human => {
            let mut out = String::new();
            writeln!(out, "seed {} samples {} per type", a.seed, a.samples).unwrap();
            for (tag, ok) in FiberTag::ALL.iter().zip(passed) {
                let status = if ok == a.samples { "pass" } else { "FAIL" };
                writeln!(out, "{:<4} {ok:>6}/{:<6} {status}", tag.as_str(), a.samples).unwrap();
            }
            for m in &mismatches {
                writeln!(out, "mismatch at {}", m.fiber_type).unwrap();
                writeln!(out, "computed {}", m.computed.to_json().trim_end()).unwrap();
                writeln!(out, "expected {}", m.expected.to_json().trim_end()).unwrap();
            }
            out
        }
        OutputFormat::Structured => {
            let per_type: Vec<serde_json::Value> = FiberTag::ALL
                .iter()
                .zip(passed)
                .map(|(tag, ok)| serde_json::json!({"type": tag.as_str(), "checked": a.samples, "passed": ok}))
                .collect();
            let bad: Vec<serde_json::Value> = mismatches
                .iter()
                .map(|m| {
                    serde_json::json!({
                        "type": m.fiber_type.to_string(),
                        "computed": serde_json::from_str::<serde_json::Value>(&m.computed.to_json()).unwrap(),
                        "expected": serde_json::from_str::<serde_json::Value>(&m.expected.to_json()).unwrap(),
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "kind": "verify",
                "seed": a.seed,
                "samples": a.samples,
                "types": per_type,
                "mismatches": bad,
            });
            serde_json::to_string_pretty(&doc).expect("summary serializes") + "\n"
        }
    };
    if mismatches.is_empty() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::new(EXIT_MISMATCH, format!("{} tuple(s) disagree with the closed forms", mismatches.len())))
    }
}
