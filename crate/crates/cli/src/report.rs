//! Report records: one line per checked cell, canonically ordered.
//!
//! The line format is six tab-separated fields:
//!
//! ```text
//! lemma<TAB>instance<TAB>params<TAB>verdict<TAB>witness-path<TAB>millis
//! ```
//!
//! Records are sorted by `(lemma, instance, params)` before emission, so the
//! stream is byte-identical regardless of how many workers produced it. The
//! witness-path field is `-` except for failing records, whose serialized
//! counterexample is written under the witness directory.

use mcov_core::Verdict;
use std::fs;
use std::path::Path;

/// One checked cell: a lemma applied to one instance at one parameter point.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub lemma: &'static str,
    pub instance: String,
    pub params: String,
    pub verdict: Verdict,
    /// Serialized counterexample, present exactly when the verdict is a
    /// failure.
    pub witness: Option<String>,
    pub millis: u64,
}

impl CheckRecord {
    pub fn new(
        lemma: &'static str,
        instance: &str,
        params: String,
        verdict: Verdict,
        witness: Option<String>,
    ) -> CheckRecord {
        CheckRecord {
            lemma,
            instance: instance.to_string(),
            params,
            verdict,
            witness: if verdict == Verdict::Fail { witness } else { None },
            millis: 0,
        }
    }
}

/// Canonical order: lexicographic on (lemma, instance, params).
pub fn sort_records(records: &mut [CheckRecord]) {
    records.sort_by(|x, y| {
        (x.lemma, x.instance.as_str(), x.params.as_str()).cmp(&(
            y.lemma,
            y.instance.as_str(),
            y.params.as_str(),
        ))
    });
}

/// File name for a failing record's witness: printable, unique per record.
pub fn witness_file_name(rec: &CheckRecord) -> String {
    let raw = format!("{}--{}--{}", rec.lemma, rec.instance, rec.params);
    let safe: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect();
    format!("{safe}.txt")
}

/// Render records to `out`, writing witnesses for failing records under
/// `witness_dir` (created on first use). Records must already be sorted.
pub fn emit<W: std::io::Write>(
    out: &mut W,
    records: &[CheckRecord],
    witness_dir: &Path,
) -> std::io::Result<()> {
    let mut dir_ready = false;
    for rec in records {
        let path = match &rec.witness {
            Some(text) => {
                if !dir_ready {
                    fs::create_dir_all(witness_dir)?;
                    dir_ready = true;
                }
                let file = witness_dir.join(witness_file_name(rec));
                fs::write(&file, text)?;
                file.display().to_string()
            }
            None => "-".to_string(),
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            rec.lemma,
            rec.instance,
            rec.params,
            rec.verdict.as_str(),
            path,
            rec.millis
        )?;
    }
    Ok(())
}

/// Per-lemma verdict tallies for the stderr summary.
pub fn summarize(records: &[CheckRecord]) -> Vec<(String, [u64; 4])> {
    let mut rows: Vec<(String, [u64; 4])> = Vec::new();
    for rec in records {
        let slot = match rows.iter_mut().find(|(l, _)| l == rec.lemma) {
            Some((_, counts)) => counts,
            None => {
                rows.push((rec.lemma.to_string(), [0; 4]));
                &mut rows.last_mut().unwrap().1
            }
        };
        let idx = match rec.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Vacuous => 2,
            Verdict::BudgetExceeded => 3,
        };
        slot[idx] += 1;
    }
    rows
}
