//! Text format for generated codes.
//!
//! ```text
//! # dnalex code n=4 gens=1 property=gc>=4 mode=full-check
//! G 2000
//! 0000
//! 2000
//! ```
//!
//! Codeword lines may also be DNA strands, or FASTA-style records
//! (`>cw<index>` followed by the strand). Other `#` lines are comments.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lexicode::LinearCode;
use crate::z4::{phi, phi_inv, DnaStrand, Z4Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordFormat {
    Z4,
    Dna,
    Fasta,
}

impl FromStr for WordFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z4" => Ok(WordFormat::Z4),
            "dna" => Ok(WordFormat::Dna),
            "fasta" => Ok(WordFormat::Fasta),
            _ => Err(Error::CodeFile { line: 0, message: format!("unknown format {s:?} (z4, dna, fasta)") }),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CodeFile {
    pub n: Option<usize>,
    pub property: Option<String>,
    pub mode: Option<String>,
    pub generators: Vec<Z4Vector>,
    pub codewords: Vec<Z4Vector>,
}

impl CodeFile {
    pub fn from_code(code: &LinearCode, property: &str, mode: &str) -> Self {
        Self {
            n: Some(code.len()),
            property: Some(property.to_string()),
            mode: Some(mode.to_string()),
            generators: code.generators().to_vec(),
            codewords: code.codewords().to_vec(),
        }
    }

    pub fn render(&self, format: WordFormat) -> String {
        let mut out = String::new();
        let n = self.n.or_else(|| self.codewords.first().map(Z4Vector::len)).unwrap_or(0);
        let _ = write!(out, "# dnalex code n={n} gens={}", self.generators.len());
        if let Some(p) = &self.property {
            let _ = write!(out, " property={p}");
        }
        if let Some(m) = &self.mode {
            let _ = write!(out, " mode={m}");
        }
        out.push('\n');
        for g in &self.generators {
            let _ = writeln!(out, "G {g}");
        }
        for (i, c) in self.codewords.iter().enumerate() {
            match format {
                WordFormat::Z4 => {
                    let _ = writeln!(out, "{c}");
                }
                WordFormat::Dna => {
                    let _ = writeln!(out, "{}", phi(c));
                }
                WordFormat::Fasta => {
                    let _ = writeln!(out, ">cw{i}\n{}", phi(c));
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut file = CodeFile::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::CodeFile { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('>') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# dnalex code") {
                parse_header(rest, &mut file).map_err(err)?;
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            if let Some(g) = line.strip_prefix("G ") {
                file.generators.push(parse_word(g.trim()).map_err(err)?);
                continue;
            }
            file.codewords.push(parse_word(line).map_err(err)?);
        }
        let n = file.n.or_else(|| file.codewords.first().or(file.generators.first()).map(Z4Vector::len));
        if let Some(n) = n {
            let mut lengths = file.generators.iter().chain(&file.codewords).map(Z4Vector::len);
            if let Some(bad) = lengths.find(|&l| l != n) {
                return Err(Error::CodeFile { line: 0, message: format!("word of length {bad} in a length-{n} code") });
            }
        }
        file.n = n;
        Ok(file)
    }
}

fn parse_header(rest: &str, file: &mut CodeFile) -> std::result::Result<(), String> {
    let mut rest = rest.trim();
    if let Some(pos) = rest.find(" mode=") {
        file.mode = Some(rest[pos + 6..].trim().to_string());
        rest = &rest[..pos];
    }
    if let Some(pos) = rest.find("property=") {
        file.property = Some(rest[pos + 9..].trim().to_string());
        rest = &rest[..pos];
    }
    for token in rest.split_whitespace() {
        match token.split_once('=') {
            Some(("n", v)) => file.n = Some(v.parse().map_err(|_| format!("bad length {v:?}"))?),
            Some(("gens", _)) => {}
            _ => return Err(format!("unexpected header field {token:?}")),
        }
    }
    Ok(())
}

/// Parses a word given either as Z4 digits or as a DNA strand.
pub fn parse_word(text: &str) -> std::result::Result<Z4Vector, String> {
    if text.chars().all(|c| c.is_ascii_digit()) {
        Z4Vector::from_str(text).map_err(|e| e.to_string())
    } else {
        let strand = DnaStrand::from_str(text).map_err(|e| e.to_string())?;
        phi_inv(&strand).map_err(|e| e.to_string())
    }
}
