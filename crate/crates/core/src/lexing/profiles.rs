//! Built-in language profiles and the `key = value` profile config parser.

use super::{LanguageProfile, StringDelim};
use crate::{Error, Result};
use std::collections::{HashMap, HashSet};
use std::path::Path;

/// Registry of language profiles with an extension lookup table.
#[derive(Debug, Clone)]
pub struct ProfileSet {
    profiles: Vec<LanguageProfile>,
    ext_index: HashMap<String, usize>,
}

impl ProfileSet {
    /// The default registry: eight common languages.
    pub fn builtin() -> Self {
        ProfileSet::build(builtin_profiles()).expect("builtin profiles are valid")
    }

    /// Parse a profile config in line-oriented `key = value` form.
    ///
    /// Sections start with `[language-name]`; keys are `extensions`,
    /// `line_comment`, `block_comment` (open + close), `string`
    /// (open + close + optional escape char) and `keywords`. Repeated
    /// keys accumulate. Lines starting with `#` are comments.
    pub fn from_config(text: &str, path: &Path) -> Result<Self> {
        let mut profiles: Vec<LanguageProfile> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                profiles.push(LanguageProfile {
                    name: name.trim().to_string(),
                    extensions: Vec::new(),
                    line_comments: Vec::new(),
                    block_comments: Vec::new(),
                    string_delims: Vec::new(),
                    keywords: HashSet::new(),
                });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(path, lineno, "expected `key = value`"))?;
            let profile = profiles
                .last_mut()
                .ok_or_else(|| Error::parse(path, lineno, "key before any [section]"))?;
            let fields: Vec<&str> = value.split_whitespace().collect();
            match key.trim() {
                "extensions" => profile
                    .extensions
                    .extend(fields.iter().map(|f| f.to_string())),
                "line_comment" => profile
                    .line_comments
                    .extend(fields.iter().map(|f| f.to_string())),
                "block_comment" => match fields.as_slice() {
                    [open, close] => profile
                        .block_comments
                        .push((open.to_string(), close.to_string())),
                    _ => {
                        return Err(Error::parse(
                            path,
                            lineno,
                            "block_comment needs exactly `open close`",
                        ))
                    }
                },
                "string" => match fields.as_slice() {
                    [open, close] => profile.string_delims.push(StringDelim {
                        open: open.to_string(),
                        close: close.to_string(),
                        escape: None,
                    }),
                    [open, close, esc] if esc.len() == 1 => {
                        profile.string_delims.push(StringDelim {
                            open: open.to_string(),
                            close: close.to_string(),
                            escape: Some(esc.as_bytes()[0]),
                        })
                    }
                    _ => {
                        return Err(Error::parse(
                            path,
                            lineno,
                            "string needs `open close [escape-char]`",
                        ))
                    }
                },
                "keywords" => profile
                    .keywords
                    .extend(fields.iter().map(|f| f.to_string())),
                other => {
                    return Err(Error::parse(path, lineno, format!("unknown key `{other}`")));
                }
            }
        }
        ProfileSet::build(profiles)
    }

    fn build(profiles: Vec<LanguageProfile>) -> Result<Self> {
        let mut ext_index = HashMap::new();
        for (i, p) in profiles.iter().enumerate() {
            if p.extensions.is_empty() {
                return Err(Error::InvalidProfile(format!(
                    "profile `{}` has no extensions",
                    p.name
                )));
            }
            for ext in &p.extensions {
                if ext.chars().any(|c| c.is_ascii_uppercase()) {
                    return Err(Error::InvalidProfile(format!(
                        "extension `{ext}` of `{}` must be lowercase",
                        p.name
                    )));
                }
                if ext_index.insert(ext.clone(), i).is_some() {
                    return Err(Error::InvalidProfile(format!(
                        "extension `{ext}` claimed by more than one profile"
                    )));
                }
            }
            for (open, close) in &p.block_comments {
                if open.is_empty() || close.is_empty() {
                    return Err(Error::InvalidProfile(format!(
                        "profile `{}` has an empty block comment marker",
                        p.name
                    )));
                }
            }
        }
        Ok(ProfileSet {
            profiles,
            ext_index,
        })
    }

    pub fn by_name(&self, name: &str) -> Option<&LanguageProfile> {
        self.profiles.iter().find(|p| p.name == name)
    }

    pub fn by_extension(&self, ext: &str) -> Option<&LanguageProfile> {
        self.ext_index.get(ext).map(|&i| &self.profiles[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &LanguageProfile> {
        self.profiles.iter()
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

fn profile(
    name: &str,
    extensions: &[&str],
    line_comments: &[&str],
    block_comments: &[(&str, &str)],
    strings: &[(&str, &str, Option<u8>)],
    keywords: &[&str],
) -> LanguageProfile {
    LanguageProfile {
        name: name.to_string(),
        extensions: extensions.iter().map(|s| s.to_string()).collect(),
        line_comments: line_comments.iter().map(|s| s.to_string()).collect(),
        block_comments: block_comments
            .iter()
            .map(|(o, c)| (o.to_string(), c.to_string()))
            .collect(),
        string_delims: strings
            .iter()
            .map(|(o, c, e)| StringDelim {
                open: o.to_string(),
                close: c.to_string(),
                escape: *e,
            })
            .collect(),
        keywords: keywords.iter().map(|s| s.to_string()).collect(),
    }
}

const C_KEYWORDS: &[&str] = &[
    "auto", "break", "case", "char", "const", "continue", "default", "do", "double", "else",
    "enum", "extern", "float", "for", "goto", "if", "inline", "int", "long", "register",
    "restrict", "return", "short", "signed", "sizeof", "static", "struct", "switch", "typedef",
    "union", "unsigned", "void", "volatile", "while",
];

const CPP_EXTRA_KEYWORDS: &[&str] = &[
    "alignas", "alignof", "bool", "catch", "class", "constexpr", "decltype", "delete", "explicit",
    "export", "false", "friend", "mutable", "namespace", "new", "noexcept", "nullptr", "operator",
    "private", "protected", "public", "template", "this", "throw", "true", "try", "typeid",
    "typename", "using", "virtual",
];

fn builtin_profiles() -> Vec<LanguageProfile> {
    let esc = Some(b'\\');
    let mut cpp_keywords: Vec<&str> = C_KEYWORDS.to_vec();
    cpp_keywords.extend_from_slice(CPP_EXTRA_KEYWORDS);
    vec![
        profile(
            "c",
            &["c", "h"],
            &["//"],
            &[("/*", "*/")],
            &[("\"", "\"", esc), ("'", "'", esc)],
            C_KEYWORDS,
        ),
        profile(
            "c++",
            &["cpp", "cc", "cxx", "hpp", "hh", "hxx"],
            &["//"],
            &[("/*", "*/")],
            &[("\"", "\"", esc), ("'", "'", esc)],
            &cpp_keywords,
        ),
        profile(
            "python",
            &["py", "pyw"],
            &["#"],
            &[],
            &[
                ("\"\"\"", "\"\"\"", esc),
                ("'''", "'''", esc),
                ("\"", "\"", esc),
                ("'", "'", esc),
            ],
            &[
                "and", "as", "assert", "break", "class", "continue", "def", "del", "elif", "else",
                "except", "finally", "for", "from", "global", "if", "import", "in", "is", "lambda",
                "nonlocal", "not", "or", "pass", "raise", "return", "try", "while", "with",
                "yield", "False", "None", "True",
            ],
        ),
        profile(
            "ruby",
            &["rb", "rake"],
            &["#"],
            &[("=begin", "=end")],
            &[("\"", "\"", esc), ("'", "'", esc)],
            &[
                "alias", "and", "begin", "break", "case", "class", "def", "defined", "do", "else",
                "elsif", "end", "ensure", "false", "for", "if", "in", "module", "next", "nil",
                "not", "or", "redo", "rescue", "retry", "return", "self", "super", "then", "true",
                "undef", "unless", "until", "when", "while", "yield",
            ],
        ),
        profile(
            "java",
            &["java"],
            &["//"],
            &[("/*", "*/")],
            &[("\"", "\"", esc), ("'", "'", esc)],
            &[
                "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class",
                "const", "continue", "default", "do", "double", "else", "enum", "extends", "final",
                "finally", "float", "for", "goto", "if", "implements", "import", "instanceof",
                "int", "interface", "long", "native", "new", "package", "private", "protected",
                "public", "return", "short", "static", "strictfp", "super", "switch",
                "synchronized", "this", "throw", "throws", "transient", "try", "void", "volatile",
                "while", "false", "null", "true",
            ],
        ),
        profile(
            "javascript",
            &["js", "mjs"],
            &["//"],
            &[("/*", "*/")],
            &[("\"", "\"", esc), ("'", "'", esc), ("`", "`", esc)],
            &[
                "break", "case", "catch", "class", "const", "continue", "debugger", "default",
                "delete", "do", "else", "export", "extends", "false", "finally", "for", "function",
                "if", "import", "in", "instanceof", "let", "new", "null", "of", "return", "static",
                "super", "switch", "this", "throw", "true", "try", "typeof", "var", "void",
                "while", "with", "yield",
            ],
        ),
        profile(
            "go",
            &["go"],
            &["//"],
            &[("/*", "*/")],
            &[("\"", "\"", esc), ("`", "`", None), ("'", "'", esc)],
            &[
                "break", "case", "chan", "const", "continue", "default", "defer", "else",
                "fallthrough", "for", "func", "go", "goto", "if", "import", "interface", "map",
                "package", "range", "return", "select", "struct", "switch", "type", "var",
            ],
        ),
        profile(
            "shell",
            &["sh", "bash"],
            &["#"],
            &[],
            &[("\"", "\"", esc), ("'", "'", None)],
            &[
                "case", "do", "done", "elif", "else", "esac", "fi", "for", "function", "if", "in",
                "select", "then", "until", "while",
            ],
        ),
    ]
}
