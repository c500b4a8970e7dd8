//! Plain-text reports with a parallel stream of `key=value` records.

use std::fmt::Display;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<String>,
    records: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn record(&mut self, key: impl Into<String>, value: impl Display) {
        self.records.push((key.into(), value.to_string()));
    }

    /// Adds a human line and a record carrying the same value.
    pub fn both(&mut self, key: &str, value: impl Display) {
        let value = value.to_string();
        self.lines.push(format!("{key}: {value}"));
        self.records.push((key.to_string(), value));
    }

    pub fn append(&mut self, other: Report) {
        self.lines.extend(other.lines);
        self.records.extend(other.records);
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn records(&self) -> &[(String, String)] {
        &self.records
    }

    /// First record value for `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.records.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self, machine: bool) -> String {
        let mut out = String::new();
        if machine {
            for (k, v) in &self.records {
                out.push_str(k);
                out.push('=');
                out.push_str(&v.replace('\n', " "));
                out.push('\n');
            }
        } else {
            for l in &self.lines {
                out.push_str(l);
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_modes() {
        let mut r = Report::new();
        r.line("header");
        r.both("verdict", "PASS");
        r.record("pairs", 12);
        assert_eq!(r.render(false), "header\nverdict: PASS\n");
        assert_eq!(r.render(true), "verdict=PASS\npairs=12\n");
        assert_eq!(r.get("pairs"), Some("12"));
    }
}
