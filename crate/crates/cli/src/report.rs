use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub millis: f64,
}

/// One line of output.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub claim: String,
    pub parameters: Value,
    pub verdict: Verdict,
    pub witness: Value,
    pub timing: Timing,
}

impl Report {
    /// Human-readable form used by `--pretty`.
    pub fn pretty(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        };
        let params = match &self.parameters {
            Value::Object(m) => m
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" "),
            v => v.to_string(),
        };
        let body = serde_json::to_string_pretty(&self.witness).unwrap_or_default();
        format!(
            "{verdict} {} {params} ({:.1} ms)\n{body}",
            self.claim, self.timing.millis
        )
    }
}
