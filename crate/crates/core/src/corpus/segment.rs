/// Shipped abbreviation list, one entry per line.
pub const DEFAULT_ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

/// Rule-based sentence splitter.
///
/// A boundary is placed after `.`, `!` or `?` (plus any closing quotes or
/// brackets) when the next non-space character is uppercase or a digit,
/// unless the text up to the period ends with a protected abbreviation.
#[derive(Debug, Clone)]
pub struct Segmenter {
    abbreviations: Vec<String>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Segmenter::from_config(DEFAULT_ABBREVIATIONS)
    }
}

impl Segmenter {
    pub fn new<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut abbreviations: Vec<String> = abbreviations
            .into_iter()
            .map(|a| a.as_ref().trim().to_lowercase())
            .filter(|a| !a.is_empty())
            .collect();
        // longest first so "figs." wins over "s."-like suffixes
        abbreviations.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        abbreviations.dedup();
        Segmenter { abbreviations }
    }

    /// Parses an abbreviation config: one entry per line, `#` comments.
    pub fn from_config(text: &str) -> Self {
        Segmenter::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn abbreviations(&self) -> &[String] {
        &self.abbreviations
    }

    fn protected(&self, before: &str) -> bool {
        let lower = before.to_lowercase();
        self.abbreviations.iter().any(|abbr| {
            lower.ends_with(abbr.as_str()) && {
                let start = lower.len() - abbr.len();
                lower[..start]
                    .chars()
                    .next_back()
                    .is_none_or(|c| !c.is_alphanumeric())
            }
        })
    }

    pub fn segment(&self, text: &str) -> Vec<String> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut out = Vec::new();
        let mut start = 0;
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if matches!(c, '.' | '!' | '?') {
                let mut end = i + 1;
                while end < chars.len() && matches!(chars[end].1, '"' | '\'' | ')' | ']' | '”' | '’') {
                    end += 1;
                }
                let mut next = end;
                while next < chars.len() && chars[next].1.is_whitespace() {
                    next += 1;
                }
                let boundary = next > end
                    && next < chars.len()
                    && (chars[next].1.is_uppercase() || chars[next].1.is_ascii_digit())
                    && !(c == '.' && self.protected(&text[..pos + 1]));
                if boundary {
                    let cut = chars[end].0;
                    let piece = text[start..cut].trim();
                    if !piece.is_empty() {
                        out.push(piece.to_string());
                    }
                    start = chars[next].0;
                    i = next;
                    continue;
                }
            }
            i += 1;
        }
        let tail = text[start..].trim();
        if !tail.is_empty() {
            out.push(tail.to_string());
        }
        out
    }
}
