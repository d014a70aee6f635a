//! Sentence splitting and cleaning for answer bodies.
//!
//! Answer bodies in the data dump are HTML fragments. Splitting keeps the
//! markup of each sentence intact so that [`clean_sentence`] can decide what a
//! sentence consisted of (a bare link, a code block, ...) before replacing
//! markup with placeholders.

pub const LINK_PLACEHOLDER: &str = "[external-link]";
pub const CODE_PLACEHOLDER: &str = "[code-snippet]";
pub const TABLE_PLACEHOLDER: &str = "[table]";
pub const FIGURE_PLACEHOLDER: &str = "[figure]";

const PLACEHOLDERS: [&str; 4] = [LINK_PLACEHOLDER, CODE_PLACEHOLDER, TABLE_PLACEHOLDER, FIGURE_PLACEHOLDER];

/// Headings with more than this many words become standalone sentences;
/// shorter ones ("Update", "Edit 2") are dropped.
const HEADING_MIN_WORDS: usize = 6;

/// Words that end in a period without ending the sentence.
const ABBREVIATIONS: &[&str] = &[
    "e.g", "i.e", "eg", "ie", "etc", "vs", "cf", "approx", "incl", "esp", "fig", "resp", "mr", "mrs", "ms", "dr",
    "prof", "st", "no", "al", "viz", "ca",
];

const BLOCK_TAGS: &[&str] = &[
    "p",
    "div",
    "li",
    "ul",
    "ol",
    "blockquote",
    "br",
    "hr",
    "dl",
    "dt",
    "dd",
    "body",
    "html",
    "section",
    "article",
    "header",
    "footer",
    "nav",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TagKind {
    Open,
    Close,
    SelfClosing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token<'a> {
    Text(&'a str),
    Tag { name: String, kind: TagKind, raw: &'a str },
}

/// Splits an HTML fragment into tags and text runs. Anything that does not
/// look like a tag (a lone `<`, an unterminated `<foo`) stays text; comments
/// and doctypes are dropped.
fn lex(input: &str) -> Vec<Token<'_>> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut text_start = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        let next = bytes.get(i + 1).copied();
        let consumed = match next {
            Some(b'!') => {
                let end = if input[i..].starts_with("<!--") {
                    input[i + 4..].find("-->").map(|e| i + 4 + e + 3)
                } else {
                    input[i..].find('>').map(|e| i + e + 1)
                };
                end.map(|e| (e, None))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'/' => tag_end(input, i).map(|e| {
                let raw = &input[i..e];
                (e, parse_tag(raw).map(|(name, kind)| Token::Tag { name, kind, raw }))
            }),
            _ => None,
        };
        match consumed {
            Some((end, tag)) => {
                if text_start < i {
                    tokens.push(Token::Text(&input[text_start..i]));
                }
                if let Some(tag) = tag {
                    tokens.push(tag);
                } else if !input[i..end].starts_with("<!") {
                    // looked like a tag but had no name (e.g. "</>"): keep as text
                    tokens.push(Token::Text(&input[i..end]));
                }
                i = end;
                text_start = end;
            }
            None => i += 1,
        }
    }
    if text_start < bytes.len() {
        tokens.push(Token::Text(&input[text_start..]));
    }
    tokens
}

/// Byte offset one past the `>` closing the tag starting at `start`, honoring
/// quoted attribute values.
fn tag_end(input: &str, start: usize) -> Option<usize> {
    let mut quote: Option<u8> = None;
    for (off, &b) in input.as_bytes()[start + 1..].iter().enumerate() {
        match quote {
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None if b == b'"' || b == b'\'' => quote = Some(b),
            None if b == b'<' => return None,
            None if b == b'>' => return Some(start + 1 + off + 1),
            None => {}
        }
    }
    None
}

fn parse_tag(raw: &str) -> Option<(String, TagKind)> {
    let inner = &raw[1..raw.len() - 1];
    let (closing, inner) = match inner.strip_prefix('/') {
        Some(rest) => (true, rest),
        None => (false, inner),
    };
    let name: String = inner.chars().take_while(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
    if name.is_empty() || !name.starts_with(|c: char| c.is_ascii_alphabetic()) {
        return None;
    }
    let kind = if closing {
        TagKind::Close
    } else if inner.trim_end().ends_with('/') || matches!(name.as_str(), "br" | "hr" | "img") {
        TagKind::SelfClosing
    } else {
        TagKind::Open
    };
    Some((name, kind))
}

/// Index of the token closing the element opened at `open` (same name,
/// nesting-aware), or `tokens.len()` when it is never closed.
fn matching_close(tokens: &[Token<'_>], open: usize, name: &str) -> usize {
    let mut depth = 0usize;
    for (i, tok) in tokens.iter().enumerate().skip(open) {
        if let Token::Tag { name: n, kind, .. } = tok {
            if n != name {
                continue;
            }
            match kind {
                TagKind::Open => depth += 1,
                TagKind::Close => {
                    depth = depth.saturating_sub(1);
                    if depth == 0 {
                        return i;
                    }
                }
                TagKind::SelfClosing => {}
            }
        }
    }
    tokens.len()
}

fn raw_span<'a>(input: &'a str, tokens: &[Token<'a>], from: usize, to: usize) -> &'a str {
    if from >= to || from >= tokens.len() {
        return "";
    }
    let start = token_offset(input, &tokens[from]);
    let last = &tokens[to.min(tokens.len()) - 1];
    let end = token_offset(input, last) + token_str(last).len();
    &input[start..end]
}

fn token_str<'a>(tok: &Token<'a>) -> &'a str {
    match tok {
        Token::Text(t) => t,
        Token::Tag { raw, .. } => raw,
    }
}

fn token_offset(input: &str, tok: &Token<'_>) -> usize {
    token_str(tok).as_ptr() as usize - input.as_ptr() as usize
}

fn visible_text(tokens: &[Token<'_>]) -> String {
    let mut out = String::new();
    for tok in tokens {
        match tok {
            Token::Text(t) => out.push_str(t),
            Token::Tag { .. } => out.push(' '),
        }
    }
    out
}

/// Splits an answer body into raw (still markup-bearing) sentences in
/// document order.
///
/// Paragraph-like elements, line breaks and blank lines bound sentences. Code
/// blocks and tables are opaque: each becomes its own sentence unless the
/// preceding sentence of the same flow is unterminated (typically "like
/// this:"), in which case it is appended to it. `h1`–`h6` headings of more
/// than five words are emitted as standalone sentences; shorter headings are
/// dropped.
pub fn split_sentences(body_html: &str) -> Vec<String> {
    let tokens = lex(body_html);
    let mut out: Vec<String> = Vec::new();
    // whether the last emitted sentence came from running text and may absorb
    // a following code block or table
    let mut attachable = false;
    let mut block: Vec<Token<'_>> = Vec::new();

    let flush = |block: &mut Vec<Token<'_>>, out: &mut Vec<String>, attachable: &mut bool| {
        if block.is_empty() {
            return;
        }
        let before = out.len();
        out.extend(split_block(body_html, block));
        if out.len() > before {
            *attachable = true;
        }
        block.clear();
    };

    let mut i = 0;
    while i < tokens.len() {
        match &tokens[i] {
            Token::Tag { name, kind: TagKind::Open, .. } if name == "pre" || name == "table" => {
                flush(&mut block, &mut out, &mut attachable);
                let close = matching_close(&tokens, i, name);
                let raw = raw_span(body_html, &tokens, i, (close + 1).min(tokens.len())).trim();
                match out.last_mut() {
                    Some(prev) if attachable && !ends_terminated(prev) => {
                        prev.push(' ');
                        prev.push_str(raw);
                    }
                    _ => out.push(raw.to_string()),
                }
                attachable = false;
                i = close + 1;
            }
            Token::Tag { name, kind: TagKind::Open, .. } if is_heading(name) => {
                flush(&mut block, &mut out, &mut attachable);
                let close = matching_close(&tokens, i, name);
                let inner = &tokens[i + 1..close.min(tokens.len())];
                if crate::text::word_count(&visible_text(inner)) >= HEADING_MIN_WORDS {
                    let raw = raw_span(body_html, &tokens, i + 1, close.min(tokens.len()));
                    out.push(collapse_whitespace(raw));
                }
                attachable = false;
                i = close + 1;
            }
            Token::Tag { name, .. } if BLOCK_TAGS.contains(&name.as_str()) || is_heading(name) => {
                flush(&mut block, &mut out, &mut attachable);
                i += 1;
            }
            Token::Text(text) => {
                let mut rest = *text;
                while let Some(pos) = find_blank_line(rest) {
                    if !rest[..pos].is_empty() {
                        block.push(Token::Text(&rest[..pos]));
                    }
                    flush(&mut block, &mut out, &mut attachable);
                    rest = rest[pos..].trim_start_matches(|c: char| c.is_whitespace());
                }
                if !rest.is_empty() {
                    block.push(Token::Text(rest));
                }
                i += 1;
            }
            tok => {
                block.push(tok.clone());
                i += 1;
            }
        }
    }
    flush(&mut block, &mut out, &mut attachable);
    out
}

fn is_heading(name: &str) -> bool {
    matches!(name, "h1" | "h2" | "h3" | "h4" | "h5" | "h6")
}

fn find_blank_line(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'\n' {
            let mut j = i + 1;
            while j < bytes.len() && (bytes[j] == b' ' || bytes[j] == b'\t' || bytes[j] == b'\r') {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'\n' {
                return Some(i);
            }
        }
        i += 1;
    }
    None
}

fn ends_terminated(raw_sentence: &str) -> bool {
    let visible = visible_text(&lex(raw_sentence));
    visible.trim_end().trim_end_matches(['"', '\'', ')', ']']).ends_with(['.', '!', '?'])
}

/// One unit of a block for boundary detection: either a plain character or an
/// opaque span (tag, inline code) that can never contain a boundary.
enum Piece<'a> {
    Char(char),
    Opaque { raw: &'a str, first_visible: Option<char> },
}

fn pieces<'a>(input: &'a str, block: &[Token<'a>]) -> Vec<Piece<'a>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < block.len() {
        match &block[i] {
            Token::Tag { name, kind: TagKind::Open, .. } if name == "code" => {
                let close = matching_close(block, i, "code");
                let first_visible =
                    visible_text(&block[i + 1..close.min(block.len())]).chars().find(|c| !c.is_whitespace());
                let raw_span = raw_span(input, block, i, (close + 1).min(block.len()));
                out.push(Piece::Opaque { raw: raw_span, first_visible });
                i = close + 1;
            }
            Token::Tag { raw, .. } => {
                out.push(Piece::Opaque { raw, first_visible: None });
                i += 1;
            }
            Token::Text(text) => {
                let mut rest = *text;
                while let Some(c) = rest.chars().next() {
                    if c == '`' {
                        if let Some(end) = rest[1..].find('`') {
                            let span = &rest[..end + 2];
                            out.push(Piece::Opaque {
                                raw: span,
                                first_visible: span[1..].chars().find(|c| !c.is_whitespace()),
                            });
                            rest = &rest[end + 2..];
                            continue;
                        }
                    }
                    out.push(Piece::Char(c));
                    rest = &rest[c.len_utf8()..];
                }
                i += 1;
            }
        }
    }
    out
}

fn split_block(input: &str, block: &[Token<'_>]) -> Vec<String> {
    let pieces = pieces(input, block);
    let mut sentences = Vec::new();
    let mut current = String::new();
    let mut i = 0;
    while i < pieces.len() {
        match &pieces[i] {
            Piece::Opaque { raw, .. } => {
                current.push_str(raw);
                i += 1;
            }
            Piece::Char(c) if matches!(c, '.' | '!' | '?') => {
                let word_before = trailing_word(&current);
                let mut j = i;
                while let Some(Piece::Char(p @ ('.' | '!' | '?'))) = pieces.get(j) {
                    current.push(*p);
                    j += 1;
                }
                while let Some(Piece::Char(p @ ('"' | '\'' | ')' | ']'))) = pieces.get(j) {
                    current.push(*p);
                    j += 1;
                }
                let single_period =
                    j == i + 1 || matches!(pieces.get(i + 1), Some(Piece::Char(c)) if !matches!(c, '.' | '!' | '?'));
                let abbreviation = *c == '.' && single_period && is_abbreviation(&word_before);
                if !abbreviation && boundary_follows(&pieces[j..]) {
                    push_sentence(&mut sentences, &mut current);
                }
                i = j;
            }
            Piece::Char(c) => {
                current.push(*c);
                i += 1;
            }
        }
    }
    push_sentence(&mut sentences, &mut current);
    sentences
}

fn trailing_word(current: &str) -> String {
    let start = current
        .rfind(|c: char| c.is_whitespace() || c == '(' || c == '>')
        .map(|p| p + current[p..].chars().next().map_or(1, char::len_utf8))
        .unwrap_or(0);
    current[start..].to_lowercase()
}

fn is_abbreviation(word: &str) -> bool {
    let word = word.trim_end_matches('.');
    ABBREVIATIONS.contains(&word)
}

/// A boundary needs whitespace after the punctuation and a next visible
/// character that does not continue the sentence in lowercase.
fn boundary_follows(rest: &[Piece<'_>]) -> bool {
    match rest.first() {
        None => return true,
        Some(Piece::Char(c)) if c.is_whitespace() => {}
        Some(_) => return false,
    }
    for piece in rest {
        match piece {
            Piece::Char(c) if c.is_whitespace() => continue,
            Piece::Char(c) => return !c.is_lowercase(),
            Piece::Opaque { first_visible: Some(c), .. } => return !c.is_lowercase(),
            Piece::Opaque { first_visible: None, .. } => continue,
        }
    }
    true
}

fn push_sentence(sentences: &mut Vec<String>, current: &mut String) {
    let sentence = collapse_whitespace(current);
    if !sentence.is_empty() {
        sentences.push(sentence);
    }
    current.clear();
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Cleans one raw sentence into annotation text.
///
/// Hyperlinks become `[external-link]`, code blocks `[code-snippet]`, tables
/// `[table]` and images `[figure]`; inline code is kept between backticks;
/// all other markup is stripped and whitespace collapsed. Returns `None` when
/// the sentence is only a hyperlink (or nothing at all once markup is gone).
///
/// `&lt;`, `&gt;` and `&amp;` stay escaped so that cleaning cleaned text is a
/// no-op.
pub fn clean_sentence(raw: &str) -> Option<String> {
    let tokens = lex(raw);
    let mut out = String::new();
    let mut links = 0usize;
    let mut i = 0;
    while i < tokens.len() {
        match &tokens[i] {
            Token::Text(t) => {
                out.push_str(&decode_entities(t));
                i += 1;
            }
            Token::Tag { name, kind, .. } => {
                let placeholder = match (name.as_str(), kind) {
                    ("a", TagKind::Open) => Some(LINK_PLACEHOLDER),
                    ("pre", TagKind::Open) => Some(CODE_PLACEHOLDER),
                    ("table", TagKind::Open) => Some(TABLE_PLACEHOLDER),
                    ("img", _) => Some(FIGURE_PLACEHOLDER),
                    _ => None,
                };
                if let Some(placeholder) = placeholder {
                    if name == "a" {
                        links += 1;
                    }
                    out.push(' ');
                    out.push_str(placeholder);
                    out.push(' ');
                    i = if *kind == TagKind::Open { matching_close(&tokens, i, name) + 1 } else { i + 1 };
                    continue;
                }
                if name == "code" && *kind == TagKind::Open {
                    let close = matching_close(&tokens, i, "code");
                    let inner: String = tokens[i + 1..close.min(tokens.len())]
                        .iter()
                        .filter_map(|t| match t {
                            Token::Text(t) => Some(decode_entities(t)),
                            Token::Tag { .. } => None,
                        })
                        .collect::<String>()
                        .replace('`', "");
                    let inner = collapse_whitespace(&inner);
                    if !inner.is_empty() {
                        out.push('`');
                        out.push_str(&inner);
                        out.push('`');
                    }
                    i = close + 1;
                    continue;
                }
                if BLOCK_TAGS.contains(&name.as_str()) || is_heading(name) {
                    out.push(' ');
                }
                i += 1;
            }
        }
    }
    let cleaned = tidy_placeholder_spacing(&collapse_whitespace(&out));
    if cleaned.is_empty() {
        return None;
    }
    if links > 0 && !has_content_beyond(&cleaned, &[LINK_PLACEHOLDER]) {
        return None;
    }
    Some(cleaned)
}

/// Placeholders are padded with spaces while cleaning; drop the padding
/// before trailing punctuation so "see <a>this</a>." reads "see
/// [external-link].".
fn tidy_placeholder_spacing(text: &str) -> String {
    let mut out = text.to_string();
    for p in PLACEHOLDERS {
        for punct in [".", ",", ";", ":", "!", "?", ")"] {
            out = out.replace(&format!("{p} {punct}"), &format!("{p}{punct}"));
        }
        out = out.replace(&format!("( {p}"), &format!("({p}"));
    }
    out
}

/// True when `text` still has alphanumeric content once the given
/// placeholders are removed.
fn has_content_beyond(text: &str, placeholders: &[&str]) -> bool {
    let mut rest = text.to_string();
    for p in placeholders {
        rest = rest.replace(p, " ");
    }
    rest.chars().any(char::is_alphanumeric)
}

/// Whether a cleaned sentence carries any text besides placeholders.
pub fn has_text_content(cleaned: &str) -> bool {
    has_content_beyond(cleaned, &PLACEHOLDERS)
}

/// Decodes character references that cannot reintroduce markup. `&lt;`,
/// `&gt;`, `&amp;` and numeric references to `<`, `>`, `&` are left as is.
fn decode_entities(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(pos) = rest.find('&') {
        out.push_str(&rest[..pos]);
        rest = &rest[pos..];
        let Some(semi) = rest[1..].find(';').map(|s| s + 1).filter(|&s| s <= 10) else {
            out.push('&');
            rest = &rest[1..];
            continue;
        };
        let entity = &rest[1..semi];
        let decoded = match entity {
            "quot" => Some('"'),
            "apos" => Some('\''),
            "nbsp" => Some(' '),
            _ => entity.strip_prefix('#').and_then(|num| {
                let code = match num.strip_prefix(['x', 'X']) {
                    Some(hex) => u32::from_str_radix(hex, 16).ok(),
                    None => num.parse::<u32>().ok(),
                };
                code.and_then(char::from_u32)
                    .map(|c| if c == '\u{a0}' { ' ' } else { c })
                    .filter(|c| !matches!(c, '<' | '>' | '&') && !c.is_control())
            }),
        };
        match decoded {
            Some(c) => {
                out.push(c);
                rest = &rest[semi + 1..];
            }
            None => {
                out.push_str(&rest[..semi + 1]);
                rest = &rest[semi + 1..];
            }
        }
    }
    out.push_str(rest);
    out
}
