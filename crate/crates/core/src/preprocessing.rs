//! Raw line → [`LogRecord`]: header extraction, variable masking, quote
//! stripping and tokenization.

use std::borrow::Cow;
use std::collections::BTreeMap;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The wildcard token. Masked variables and template variables both render
/// as this literal.
pub const WILDCARD: &str = "<*>";

/// Private-use code point standing in for [`WILDCARD`] while split
/// characters are applied.
const WILDCARD_SENTINEL: char = '\u{E000}';

const CONTENT_FIELD: &str = "Content";

/// A compiled log header format such as
/// `<Date> <Time> <Pid> <Level> <Component>: <Content>`.
///
/// Text between placeholders follows the LogHub convention: it is a regex
/// fragment (so `\[` is a literal bracket and `(\[<PID>\])?` an optional
/// group), except that every run of whitespace matches one or more
/// whitespace characters. Non-content placeholders match lazily; `<Content>`
/// takes the rest of the line.
#[derive(Debug, Clone)]
pub struct HeaderPattern {
    template_text: String,
    field_names: Vec<String>,
    regex: Regex,
}

impl HeaderPattern {
    pub fn compile(template_text: &str) -> Result<Self> {
        let err = |message: &str| Error::HeaderPattern {
            pattern: template_text.to_string(),
            message: message.to_string(),
        };

        let mut field_names: Vec<String> = Vec::new();
        let mut re = String::from("^");
        let mut chars = template_text.chars().peekable();
        let mut in_space = false;

        while let Some(c) = chars.next() {
            if c.is_whitespace() {
                if !in_space {
                    re.push_str(r"\s+");
                    in_space = true;
                }
                continue;
            }
            in_space = false;
            match c {
                '\\' => match chars.next() {
                    Some(escaped) => {
                        re.push('\\');
                        re.push(escaped);
                    }
                    None => return Err(err("trailing backslash")),
                },
                '<' => {
                    let mut name = String::new();
                    loop {
                        match chars.next() {
                            Some('>') => break,
                            Some(ch) if ch.is_ascii_alphanumeric() || ch == '_' => name.push(ch),
                            Some('<') => return Err(err("nested '<' inside placeholder")),
                            Some(_) => return Err(err("placeholder names may only contain [A-Za-z0-9_]")),
                            None => return Err(err("unbalanced '<': placeholder is not closed")),
                        }
                    }
                    if name.is_empty() {
                        return Err(err("empty placeholder `<>`"));
                    }
                    if field_names.contains(&name) {
                        return Err(err(&format!("duplicate placeholder <{name}>")));
                    }
                    if name == CONTENT_FIELD {
                        re.push_str("(?P<Content>.*)");
                    } else {
                        re.push_str(&format!("(?P<{name}>.*?)"));
                    }
                    field_names.push(name);
                }
                '>' => return Err(err("unbalanced '>' outside a placeholder")),
                other => re.push(other),
            }
        }
        re.push('$');

        if !field_names.iter().any(|n| n == CONTENT_FIELD) {
            return Err(err("missing the <Content> placeholder"));
        }
        let regex = Regex::new(&re).map_err(|e| err(&e.to_string()))?;
        Ok(HeaderPattern {
            template_text: template_text.to_string(),
            field_names,
            regex,
        })
    }

    pub fn template_text(&self) -> &str {
        &self.template_text
    }

    pub fn field_names(&self) -> &[String] {
        &self.field_names
    }

    /// Matches a line, returning the non-content header fields and the
    /// content, or `None` for a non-conforming line.
    pub fn match_line<'a>(&self, line: &'a str) -> Option<(BTreeMap<String, String>, &'a str)> {
        let caps = self.regex.captures(line)?;
        let mut fields = BTreeMap::new();
        let mut content = "";
        for name in &self.field_names {
            let value = caps.name(name).map_or("", |m| m.as_str());
            if name == CONTENT_FIELD {
                content = value;
            } else {
                fields.insert(name.clone(), value.to_string());
            }
        }
        Some((fields, content))
    }
}

/// A named regular expression whose matches are replaced by [`WILDCARD`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MaskRuleSpec {
    pub name: String,
    pub pattern: String,
}

#[derive(Debug, Clone)]
pub struct MaskRule {
    name: String,
    regex: Regex,
}

impl MaskRule {
    pub fn new(name: &str, pattern: &str) -> Result<Self> {
        let regex = Regex::new(pattern).map_err(|source| Error::MaskRule {
            name: name.to_string(),
            source,
        })?;
        Ok(MaskRule {
            name: name.to_string(),
            regex,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pattern(&self) -> &str {
        self.regex.as_str()
    }
}

/// IPv4 with an optional port, and URLs with a scheme prefix.
pub fn default_mask_rule_specs() -> Vec<MaskRuleSpec> {
    vec![
        MaskRuleSpec {
            name: "url".into(),
            pattern: r"\b[A-Za-z][A-Za-z0-9+.\-]*://[^\s]+".into(),
        },
        MaskRuleSpec {
            name: "ipv4".into(),
            pattern: r"\b(?:\d{1,3}\.){3}\d{1,3}(?::\d{1,5})?\b".into(),
        },
    ]
}

pub fn compile_mask_rules(specs: &[MaskRuleSpec]) -> Result<Vec<MaskRule>> {
    specs.iter().map(|s| MaskRule::new(&s.name, &s.pattern)).collect()
}

/// Applies each rule in declared order, replacing every match with
/// [`WILDCARD`].
pub fn mask_variables(content: &str, rules: &[MaskRule]) -> String {
    let mut out = Cow::Borrowed(content);
    for rule in rules {
        if let Cow::Owned(replaced) = rule.regex.replace_all(&out, WILDCARD) {
            out = Cow::Owned(replaced);
        }
    }
    out.into_owned()
}

/// Removes one leading/trailing quote pair when both ends carry the same
/// quote character.
pub fn strip_quotes(content: &str) -> &str {
    for q in ['"', '\''] {
        if content.len() >= 2 && content.starts_with(q) && content.ends_with(q) {
            return &content[1..content.len() - 1];
        }
    }
    content
}

/// Splits on whitespace and on every character of `split_chars`, dropping
/// the delimiters and empty pieces. [`WILDCARD`] always survives as one token.
pub fn tokenize(content: &str, split_chars: &[char]) -> Vec<String> {
    if split_chars.is_empty() {
        return content.split_whitespace().map(str::to_string).collect();
    }
    let protected = content.replace(WILDCARD, &WILDCARD_SENTINEL.to_string());
    protected
        .split(|c: char| c.is_whitespace() || split_chars.contains(&c))
        .filter(|t| !t.is_empty())
        .map(|t| {
            if t.contains(WILDCARD_SENTINEL) {
                t.replace(WILDCARD_SENTINEL, WILDCARD)
            } else {
                t.to_string()
            }
        })
        .collect()
}

/// One preprocessed log line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRecord {
    /// 1-based position in the input.
    pub line_id: usize,
    pub raw: String,
    pub header_fields: BTreeMap<String, String>,
    /// Content as extracted by the header pattern, before masking.
    pub message: String,
    /// Content after masking and quote stripping.
    pub content: String,
    pub tokens: Vec<String>,
}

impl LogRecord {
    pub fn first_token(&self) -> Option<&str> {
        self.tokens.first().map(String::as_str)
    }
}

/// Everything needed to turn a raw line into a [`LogRecord`].
#[derive(Debug, Clone)]
pub struct Preprocessor {
    header: HeaderPattern,
    mask_rules: Vec<MaskRule>,
    split_chars: Vec<char>,
}

impl Preprocessor {
    pub fn new(header: HeaderPattern, mask_rules: Vec<MaskRule>, split_chars: Vec<char>) -> Self {
        Preprocessor {
            header,
            mask_rules,
            split_chars,
        }
    }

    pub fn split_chars(&self) -> &[char] {
        &self.split_chars
    }

    /// Lines that do not match the header keep the whole line as content.
    pub fn process(&self, line_id: usize, raw: &str) -> LogRecord {
        let raw = raw.trim_end_matches(['\r', '\n']);
        let (header_fields, message) = match self.header.match_line(raw) {
            Some((fields, content)) => (fields, content),
            None => (BTreeMap::new(), raw),
        };
        let masked = mask_variables(message, &self.mask_rules);
        let content = strip_quotes(masked.trim()).to_string();
        let tokens = tokenize(&content, &self.split_chars);
        LogRecord {
            line_id,
            raw: raw.to_string(),
            header_fields,
            message: message.to_string(),
            content,
            tokens,
        }
    }
}

/// Splits a byte buffer into lines, replacing invalid UTF-8 sequences.
/// A trailing newline does not produce an extra empty line.
pub fn lines_lossy(bytes: &[u8]) -> Vec<String> {
    if bytes.is_empty() {
        return Vec::new();
    }
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    body.split(|&b| b == b'\n')
        .map(|l| {
            let l = l.strip_suffix(b"\r").unwrap_or(l);
            String::from_utf8_lossy(l).into_owned()
        })
        .collect()
}
