//! Tabular check reports shared by the verification suites.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;

/// One verified instance of an identity or inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub lemma: String,
    pub instance: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl CheckRow {
    pub fn new(
        lemma: impl Into<String>,
        instance: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
        pass: bool,
    ) -> Self {
        CheckRow {
            lemma: lemma.into(),
            instance: instance.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        }
    }

    /// `PASS lemma=… instance=…`.
    pub fn summary_line(&self) -> String {
        format!(
            "{} lemma={} instance={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.lemma,
            self.instance
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// Header `lemma,instance,expected,actual,pass`, one row per check.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r).map_err(csv_io)?;
        }
        out.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_io(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => crate::Error::Io(io),
        other => crate::Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = Report::default();
        r.push(CheckRow::new("sigma", "(1,0,1)", "7/2", "7/2", true));
        r.push(CheckRow::new("bound", "N=1,L=4", "<16", 24, false));
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "lemma,instance,expected,actual,pass\nsigma,\"(1,0,1)\",7/2,7/2,true\nbound,\"N=1,L=4\",<16,24,false\n"
        );
        assert!(!r.all_pass());
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.rows[1].summary_line(), "FAIL lemma=bound instance=N=1,L=4");
    }
}
