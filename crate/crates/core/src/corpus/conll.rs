//! Streaming reader for CoNLL-style dependency tables.

use std::collections::HashMap;
use std::io::{self, BufRead};

use serde::{Deserialize, Serialize};

use super::token::{Pos, Sentence, Token};

/// 0-based column positions. The default layout is CoNLL-X: index, form,
/// lemma, coarse POS, head at column 7 and deprel at column 8 (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub index: usize,
    pub surface: usize,
    pub lemma: usize,
    pub pos: usize,
    pub head: usize,
    pub deprel: usize,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            index: 0,
            surface: 1,
            lemma: 2,
            pos: 3,
            head: 6,
            deprel: 7,
        }
    }
}

impl ColumnMap {
    fn width(&self) -> usize {
        1 + [self.index, self.surface, self.lemma, self.pos, self.head, self.deprel]
            .into_iter()
            .max()
            .unwrap_or(0)
    }
}

/// Maps corpus POS tags onto coarse categories.
///
/// Exact entries win. Tags without an entry fall back to prefix rules that
/// cover Universal Dependencies, Penn Treebank and TreeTagger tagsets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PosMap {
    exact: HashMap<String, Pos>,
}

impl PosMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, tag: impl Into<String>, pos: Pos) {
        self.exact.insert(tag.into(), pos);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, Pos)> {
        self.exact.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn map(&self, tag: &str) -> Pos {
        if let Some(p) = self.exact.get(tag) {
            return *p;
        }
        match tag {
            "NOUN" | "n" | "N" => Pos::Noun,
            "VERB" | "v" | "V" => Pos::Verb,
            "ADJ" | "a" | "A" | "j" | "J" => Pos::Adjective,
            t if t.starts_with("NN") => Pos::Noun,
            t if t.starts_with("VB") || t.starts_with("VV") || t.starts_with("VH") => Pos::Verb,
            t if t.starts_with("JJ") => Pos::Adjective,
            _ => Pos::Other,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConllFormat {
    pub columns: ColumnMap,
    pub pos_map: PosMap,
}

/// Iterator over the sentences of a CoNLL stream.
///
/// Malformed sentences (short rows, non-numeric or non-contiguous indices,
/// out-of-range heads, cycles) are skipped and counted.
pub struct ConllReader<R> {
    input: R,
    format: ConllFormat,
    line: String,
    skipped: usize,
    done: bool,
}

impl<R: BufRead> ConllReader<R> {
    pub fn new(input: R) -> Self {
        Self::with_format(input, ConllFormat::default())
    }

    pub fn with_format(input: R, format: ConllFormat) -> Self {
        ConllReader {
            input,
            format,
            line: String::new(),
            skipped: 0,
            done: false,
        }
    }

    /// Number of malformed sentences skipped so far.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// Read the raw rows of the next block, `None` at end of input.
    fn next_block(&mut self) -> io::Result<Option<Vec<String>>> {
        let mut rows = Vec::new();
        loop {
            self.line.clear();
            if self.input.read_line(&mut self.line)? == 0 {
                self.done = true;
                return Ok(if rows.is_empty() { None } else { Some(rows) });
            }
            let l = self.line.trim_end_matches(['\n', '\r']);
            if l.trim().is_empty() {
                if rows.is_empty() {
                    continue;
                }
                return Ok(Some(rows));
            }
            if l.starts_with('#') {
                continue;
            }
            rows.push(l.to_owned());
        }
    }

    fn parse_block(&self, rows: &[String]) -> Option<Sentence> {
        let cols = &self.format.columns;
        let width = cols.width();
        let mut tokens = Vec::with_capacity(rows.len());
        for row in rows {
            let fields: Vec<&str> = row.split('\t').collect();
            if fields.len() < width {
                return None;
            }
            let index = fields[cols.index];
            // multiword ranges (1-2) and empty nodes (1.1)
            if index.contains('-') || index.contains('.') {
                continue;
            }
            let index: usize = index.parse().ok()?;
            if index != tokens.len() + 1 {
                return None;
            }
            let head: usize = fields[cols.head].parse().ok()?;
            tokens.push(Token {
                surface: fields[cols.surface].to_owned(),
                lemma: fields[cols.lemma].to_owned(),
                pos: self.format.pos_map.map(fields[cols.pos]),
                head,
                deprel: fields[cols.deprel].to_owned(),
            });
        }
        let sentence = Sentence::new(tokens);
        sentence.validate().ok()?;
        Some(sentence)
    }
}

impl<R: BufRead> Iterator for ConllReader<R> {
    type Item = io::Result<Sentence>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let rows = match self.next_block() {
                Ok(Some(rows)) => rows,
                Ok(None) => return None,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            };
            match self.parse_block(&rows) {
                Some(s) if !s.is_empty() => return Some(Ok(s)),
                Some(_) => {}
                None => self.skipped += 1,
            }
        }
        None
    }
}

/// Parse a whole stream with the default format.
pub fn parse_conll<R: BufRead>(input: R) -> ConllReader<R> {
    ConllReader::new(input)
}
