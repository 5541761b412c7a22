use serde::{Deserialize, Serialize};

use super::CorpusError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the sentence.
    pub id: usize,
    pub form: String,
    pub lemma: String,
    /// Universal POS tag (UPOS column).
    pub upos: String,
    /// 0 for the root token.
    pub head: usize,
    pub deprel: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedSentence {
    pub tokens: Vec<Token>,
}

impl ParsedSentence {
    /// Checks head ranges and the single-root rule.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.tokens.len();
        if n == 0 {
            return Err("sentence has no tokens".into());
        }
        for (i, t) in self.tokens.iter().enumerate() {
            if t.id != i + 1 {
                return Err(format!("token ids must run 1..{n}, found {} at position {}", t.id, i + 1));
            }
            if t.head > n {
                return Err(format!("token {} has head {} outside 0..={n}", t.id, t.head));
            }
        }
        let roots = self.tokens.iter().filter(|t| t.head == 0).count();
        if roots != 1 {
            return Err(format!("expected exactly one root token, found {roots}"));
        }
        Ok(())
    }

    pub fn root(&self) -> Option<&Token> {
        self.tokens.iter().find(|t| t.head == 0)
    }

    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn children(&self, id: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == id)
    }

    pub fn text(&self) -> String {
        self.tokens.iter().map(|t| t.form.as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// Reads CoNLL-U text into sentence blocks.
///
/// Comment lines are skipped, as are multiword-token ranges (`1-2`) and
/// empty nodes (`1.1`). Only FORM, LEMMA, UPOS, HEAD and DEPREL are kept.
pub fn parse_conllu(text: &str) -> Result<Vec<ParsedSentence>, CorpusError> {
    let mut blocks = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut block_start = 1;

    let flush = |tokens: &mut Vec<Token>, start: usize, blocks: &mut Vec<ParsedSentence>| {
        if tokens.is_empty() {
            return Ok(());
        }
        let sentence = ParsedSentence {
            tokens: std::mem::take(tokens),
        };
        sentence
            .validate()
            .map_err(|message| CorpusError::Conllu { line: start, message })?;
        blocks.push(sentence);
        Ok(())
    };

    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut current, block_start, &mut blocks)?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if current.is_empty() {
            block_start = line_no;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(CorpusError::Conllu {
                line: line_no,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let parse_num = |s: &str, what: &str| {
            s.parse::<usize>().map_err(|_| CorpusError::Conllu {
                line: line_no,
                message: format!("invalid {what} `{s}`"),
            })
        };
        current.push(Token {
            id: parse_num(cols[0], "ID")?,
            form: cols[1].to_string(),
            lemma: cols[2].to_string(),
            upos: cols[3].to_string(),
            head: parse_num(cols[6], "HEAD")?,
            deprel: cols[7].to_string(),
        });
    }
    flush(&mut current, block_start, &mut blocks)?;
    Ok(blocks)
}
