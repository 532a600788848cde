//! Line-oriented input documents: `key = value` lines and `begin name [label]` ... `end`
//! blocks. `#` starts a comment; blank lines are ignored.

use std::fmt;

/// Location-carrying input error (1-based line and column).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl InputError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        InputError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for InputError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyLine {
    pub line: usize,
    pub key: String,
    pub value: String,
    /// Column where `value` starts.
    pub value_column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLine {
    pub line: usize,
    /// Column of the first non-blank character.
    pub column: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub line: usize,
    pub name: String,
    pub label: Option<String>,
    pub body: Vec<BlockLine>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Key(KeyLine),
    Block(Block),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub items: Vec<Item>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn leading(line: &str) -> usize {
    line.chars().take_while(|c| c.is_whitespace()).count() + 1
}

pub fn parse_document(text: &str) -> Result<Document, InputError> {
    let mut items = Vec::new();
    let mut open: Option<Block> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = leading(line);
        let mut words = trimmed.split_whitespace();
        let first = words.next().unwrap_or("");
        if let Some(block) = open.as_mut() {
            if trimmed == "end" {
                items.push(Item::Block(open.take().expect("open block")));
            } else if first == "begin" {
                return Err(InputError::new(ln, col, "blocks cannot be nested"));
            } else {
                block.body.push(BlockLine {
                    line: ln,
                    column: col,
                    text: trimmed.to_string(),
                });
            }
            continue;
        }
        if first == "begin" {
            let name = words
                .next()
                .ok_or_else(|| InputError::new(ln, col, "`begin` needs a block name"))?;
            let label = words.next().map(str::to_string);
            if let Some(extra) = words.next() {
                let at = line.find(extra).map_or(col, |p| p + 1);
                return Err(InputError::new(ln, at, format!("unexpected `{extra}`")));
            }
            open = Some(Block {
                line: ln,
                name: name.to_string(),
                label,
                body: Vec::new(),
            });
            continue;
        }
        if trimmed == "end" {
            return Err(InputError::new(ln, col, "`end` without `begin`"));
        }
        let Some(eq) = line.find('=') else {
            return Err(InputError::new(ln, col, "expected `key = value` or `begin <block>`"));
        };
        let key = line[..eq].trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(InputError::new(ln, col, "malformed key"));
        }
        let after = &line[eq + 1..];
        let value = after.trim();
        let value_column = eq + 2 + (after.len() - after.trim_start().len());
        if items
            .iter()
            .any(|it| matches!(it, Item::Key(k) if k.key == key))
        {
            return Err(InputError::new(ln, col, format!("duplicate key `{key}`")));
        }
        items.push(Item::Key(KeyLine {
            line: ln,
            key: key.to_string(),
            value: value.to_string(),
            value_column,
        }));
    }
    if let Some(b) = open {
        return Err(InputError::new(
            last_line.max(b.line),
            1,
            format!("block `{}` opened on line {} is not closed", b.name, b.line),
        ));
    }
    Ok(Document { items })
}

impl Document {
    pub fn keys(&self) -> impl Iterator<Item = &KeyLine> {
        self.items.iter().filter_map(|i| match i {
            Item::Key(k) => Some(k),
            Item::Block(_) => None,
        })
    }

    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.items.iter().filter_map(|i| match i {
            Item::Block(b) => Some(b),
            Item::Key(_) => None,
        })
    }

    pub fn key(&self, name: &str) -> Option<&KeyLine> {
        self.keys().find(|k| k.key == name)
    }

    /// Rejects keys and blocks outside the allowed lists.
    pub fn restrict(&self, keys: &[&str], blocks: &[&str]) -> Result<(), InputError> {
        for k in self.keys() {
            if !keys.contains(&k.key.as_str()) {
                return Err(InputError::new(k.line, 1, format!("unknown key `{}`", k.key)));
            }
        }
        for b in self.blocks() {
            if !blocks.contains(&b.name.as_str()) {
                return Err(InputError::new(b.line, 1, format!("unknown block `{}`", b.name)));
            }
        }
        Ok(())
    }

    /// Parses the value of `name` with `f`, or returns `default` when absent.
    pub fn parsed<T>(&self, name: &str, default: T, f: impl Fn(&str) -> Option<T>) -> Result<T, InputError> {
        match self.key(name) {
            None => Ok(default),
            Some(k) => f(&k.value)
                .ok_or_else(|| InputError::new(k.line, k.value_column, format!("invalid value for `{name}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_blocks_and_comments() {
        let doc = parse_document("# head\nvars = x y   # trailing\n\nbegin ideal k1\n x\nend\n").unwrap();
        assert_eq!(doc.key("vars").unwrap().value, "x y");
        assert_eq!(doc.key("vars").unwrap().value_column, 8);
        let b = doc.blocks().next().unwrap();
        assert_eq!(b.label.as_deref(), Some("k1"));
        assert_eq!(b.body[0].column, 2);
    }

    #[test]
    fn structural_errors() {
        assert_eq!(parse_document("begin a\nbegin b\nend\n").unwrap_err().line, 2);
        assert_eq!(parse_document("x = 1\nx = 2\n").unwrap_err().line, 2);
        assert_eq!(parse_document("begin a\nx\n").unwrap_err().line, 2);
        assert_eq!(parse_document("junk\n").unwrap_err().line, 1);
        let doc = parse_document("foo = 1\n").unwrap();
        assert!(doc.restrict(&["vars"], &[]).is_err());
    }
}
