//! Tokenizers shared by the scorers, the sentence graph and ROUGE.

/// Lowercased alphanumeric word tokens, with backticked inline-code spans kept
/// as single tokens (without the backticks).
///
/// Used by the lexical baselines and the TextRank graph so that code
/// identifiers such as `list.sort()` are not shredded into `list` and `sort`.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if c == '`' {
            if let Some(end) = rest[1..].find('`') {
                flush(&mut word, &mut tokens);
                let span = rest[1..1 + end].trim();
                if !span.is_empty() {
                    tokens.push(span.to_lowercase());
                }
                rest = &rest[end + 2..];
                continue;
            }
        }
        if c.is_alphanumeric() {
            word.extend(c.to_lowercase());
        } else {
            flush(&mut word, &mut tokens);
        }
        rest = &rest[c.len_utf8()..];
    }
    flush(&mut word, &mut tokens);
    tokens
}

/// Lowercased alphanumeric runs; no stemming, no stopwords, no code handling.
pub fn rouge_tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_lowercase).collect()
}

/// Whitespace-delimited word count.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

fn flush(word: &mut String, tokens: &mut Vec<String>) {
    if !word.is_empty() {
        tokens.push(std::mem::take(word));
    }
}
