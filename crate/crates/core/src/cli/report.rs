use serde::Serialize;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub arity: Option<usize>,
    pub truncation: Option<u32>,
    pub length_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    pub location: String,
    pub value: String,
}

/// The outcome of one command. Timing is left out so that reports are
/// reproducible byte for byte.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub caps: Caps,
    /// Results, in the order they were computed.
    pub data: Vec<Line>,
    /// Residuals, violations, obstructions and unchecked ranges.
    pub findings: Vec<Line>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            verdict: String::new(),
            caps: Caps::default(),
            data: Vec::new(),
            findings: Vec::new(),
        }
    }

    pub fn datum(&mut self, location: impl Into<String>, value: impl Into<String>) {
        self.data.push(Line {
            location: location.into(),
            value: value.into(),
        });
    }

    pub fn finding(&mut self, location: impl Into<String>, value: impl Into<String>) {
        self.findings.push(Line {
            location: location.into(),
            value: value.into(),
        });
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let cap = |c: Option<String>| c.unwrap_or_else(|| "-".into());
        let mut out = format!("command: {}\nverdict: {}\n", self.command, self.verdict);
        out += &format!(
            "caps: arity {}, truncation {}, length cap {}\n",
            cap(self.caps.arity.map(|x| x.to_string())),
            cap(self.caps.truncation.map(|x| x.to_string())),
            cap(self.caps.length_cap.map(|x| x.to_string())),
        );
        for (title, lines) in [("data", &self.data), ("findings", &self.findings)] {
            out += &format!("{title}: {}\n", lines.len());
            for l in lines {
                out += &format!("  {}: {}\n", l.location, l.value);
            }
        }
        out
    }
}
