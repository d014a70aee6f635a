use std::io::{BufRead, BufReader, Read};

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use serde::Serialize;

use super::{parse_tags, DumpError, DuplicateLink, PostRecord, PostType, DUPLICATE_LINK_TYPE};

const READ_BUFFER: usize = 64 * 1024;

/// Attributes of one `<row/>` element and the byte offset it starts at.
struct Row {
    offset: u64,
    attrs: Vec<(String, String)>,
}

impl Row {
    fn get(&self, name: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    fn required(&self, name: &'static str) -> Result<&str, DumpError> {
        self.get(name).ok_or(DumpError::MissingAttribute { offset: self.offset, attribute: name })
    }

    fn number<T: std::str::FromStr>(&self, name: &'static str, value: &str) -> Result<T, DumpError> {
        value.trim().parse().map_err(|_| DumpError::InvalidAttribute {
            offset: self.offset,
            attribute: name,
            value: value.to_string(),
        })
    }

    fn required_number<T: std::str::FromStr>(&self, name: &'static str) -> Result<T, DumpError> {
        self.number(name, self.required(name)?)
    }

    fn optional_number<T: std::str::FromStr>(&self, name: &'static str) -> Result<Option<T>, DumpError> {
        self.get(name).map(|v| self.number(name, v)).transpose()
    }
}

/// Pulls `<row>` elements out of a dump table one at a time, reusing a single
/// event buffer, so memory stays flat however long the stream is.
struct RowReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    open: Vec<String>,
    done: bool,
}

impl<R: BufRead> RowReader<R> {
    fn new(inner: R) -> Self {
        Self { reader: Reader::from_reader(inner), buf: Vec::new(), open: Vec::new(), done: false }
    }

    fn xml_error(&self, offset: u64, message: impl ToString) -> DumpError {
        DumpError::Xml { offset, message: message.to_string() }
    }

    fn attributes(&self, offset: u64, element: &BytesStart<'_>) -> Result<Vec<(String, String)>, DumpError> {
        element
            .attributes()
            .map(|attr| {
                let attr = attr.map_err(|e| self.xml_error(offset, e))?;
                let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
                let value = attr.unescape_value().map_err(|e| self.xml_error(offset, e))?.into_owned();
                Ok((key, value))
            })
            .collect()
    }

    fn next_row(&mut self) -> Option<Result<Row, DumpError>> {
        if self.done {
            return None;
        }
        let result = self.advance();
        if !matches!(result, Some(Ok(_))) {
            self.done = true;
        }
        result
    }

    fn advance(&mut self) -> Option<Result<Row, DumpError>> {
        loop {
            self.buf.clear();
            let offset = self.reader.buffer_position();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(event) => event,
                Err(e) => {
                    let at = self.reader.error_position();
                    return Some(Err(DumpError::Xml { offset: at, message: e.to_string() }));
                }
            };
            match event {
                Event::Empty(e) if e.name().as_ref() == b"row" => {
                    let e = e.into_owned();
                    return Some(self.attributes(offset, &e).map(|attrs| Row { offset, attrs }));
                }
                Event::Start(e) => {
                    let e = e.into_owned();
                    self.open.push(String::from_utf8_lossy(e.name().as_ref()).into_owned());
                    if e.name().as_ref() == b"row" {
                        return Some(self.attributes(offset, &e).map(|attrs| Row { offset, attrs }));
                    }
                }
                Event::End(_) => {
                    self.open.pop();
                }
                Event::Eof => {
                    let end = self.reader.buffer_position();
                    return self
                        .open
                        .last()
                        .map(|name| Err(self.xml_error(end, format!("input ended inside <{name}>"))));
                }
                _ => {}
            }
        }
    }
}

/// Counts of `Posts.xml` rows that were read but not yielded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PostStats {
    pub rows: u64,
    pub yielded: u64,
    pub missing_body: u64,
    /// Questions without a title or answers without a parent.
    pub incomplete: u64,
    /// Post types other than question and answer (wikis, excerpts, ...).
    pub other_type: u64,
}

/// Streaming parser over `Posts.xml`.
pub struct PostsParser<R: BufRead> {
    rows: RowReader<R>,
    stats: PostStats,
}

pub fn parse_posts<R: Read>(stream: R) -> PostsParser<BufReader<R>> {
    PostsParser { rows: RowReader::new(BufReader::with_capacity(READ_BUFFER, stream)), stats: PostStats::default() }
}

impl<R: BufRead> PostsParser<R> {
    pub fn stats(&self) -> PostStats {
        self.stats
    }

    fn record(&mut self, row: Row) -> Result<Option<PostRecord>, DumpError> {
        let post_id = row.required_number("Id")?;
        let post_type = match row.required_number::<u32>("PostTypeId")? {
            1 => PostType::Question,
            2 => PostType::Answer,
            _ => {
                self.stats.other_type += 1;
                return Ok(None);
            }
        };
        let Some(body) = row.get("Body") else {
            self.stats.missing_body += 1;
            return Ok(None);
        };
        let parent_id = row.optional_number("ParentId")?;
        let title = row.get("Title").map(str::to_string);
        let complete = match post_type {
            PostType::Question => title.as_deref().is_some_and(|t| !t.trim().is_empty()),
            PostType::Answer => parent_id.is_some(),
        };
        if !complete {
            self.stats.incomplete += 1;
            return Ok(None);
        }
        Ok(Some(PostRecord {
            post_id,
            post_type,
            parent_id,
            title,
            body_html: body.to_string(),
            tags: row.get("Tags").map(parse_tags).unwrap_or_default(),
            score: row.optional_number("Score")?.unwrap_or(0),
        }))
    }
}

impl<R: BufRead> Iterator for PostsParser<R> {
    type Item = Result<PostRecord, DumpError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let row = match self.rows.next_row()? {
                Ok(row) => row,
                Err(e) => return Some(Err(e)),
            };
            self.stats.rows += 1;
            match self.record(row) {
                Ok(Some(post)) => {
                    self.stats.yielded += 1;
                    return Some(Ok(post));
                }
                Ok(None) => {}
                Err(e) => {
                    self.rows.done = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

/// Counts of `PostLinks.xml` rows that were read but not yielded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LinkStats {
    pub rows: u64,
    pub yielded: u64,
    /// Rows whose link type is not the duplicate type.
    pub other_link_type: u64,
    /// Duplicate rows linking a post to itself.
    pub self_links: u64,
}

/// Streaming parser over `PostLinks.xml`, yielding duplicate links only.
pub struct PostLinksParser<R: BufRead> {
    rows: RowReader<R>,
    stats: LinkStats,
}

pub fn parse_postlinks<R: Read>(stream: R) -> PostLinksParser<BufReader<R>> {
    PostLinksParser { rows: RowReader::new(BufReader::with_capacity(READ_BUFFER, stream)), stats: LinkStats::default() }
}

impl<R: BufRead> PostLinksParser<R> {
    pub fn stats(&self) -> LinkStats {
        self.stats
    }

    fn link(&mut self, row: Row) -> Result<Option<DuplicateLink>, DumpError> {
        if row.required_number::<u32>("LinkTypeId")? != DUPLICATE_LINK_TYPE {
            self.stats.other_link_type += 1;
            return Ok(None);
        }
        let link = DuplicateLink {
            duplicate_post_id: row.required_number("PostId")?,
            original_post_id: row.required_number("RelatedPostId")?,
        };
        if link.duplicate_post_id == link.original_post_id {
            self.stats.self_links += 1;
            return Ok(None);
        }
        Ok(Some(link))
    }
}

impl<R: BufRead> Iterator for PostLinksParser<R> {
    type Item = Result<DuplicateLink, DumpError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let row = match self.rows.next_row()? {
                Ok(row) => row,
                Err(e) => return Some(Err(e)),
            };
            self.stats.rows += 1;
            match self.link(row) {
                Ok(Some(link)) => {
                    self.stats.yielded += 1;
                    return Some(Ok(link));
                }
                Ok(None) => {}
                Err(e) => {
                    self.rows.done = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINKS: &str = r#"<?xml version="1.0" encoding="utf-8"?>
<postlinks>
  <row Id="1" CreationDate="2010-01-01T00:00:00.000" PostId="10" RelatedPostId="20" LinkTypeId="1" />
  <row Id="2" CreationDate="2010-01-01T00:00:00.000" PostId="11" RelatedPostId="20" LinkTypeId="3" />
  <row Id="3" CreationDate="2010-01-01T00:00:00.000" PostId="12" RelatedPostId="20" LinkTypeId="3" />
</postlinks>"#;

    #[test]
    fn keeps_duplicate_links_only() {
        let mut parser = parse_postlinks(LINKS.as_bytes());
        let links: Vec<_> = parser.by_ref().collect::<Result<_, _>>().unwrap();
        assert_eq!(
            links,
            [
                DuplicateLink { duplicate_post_id: 11, original_post_id: 20 },
                DuplicateLink { duplicate_post_id: 12, original_post_id: 20 }
            ]
        );
        assert_eq!(parser.stats(), LinkStats { rows: 3, yielded: 2, other_link_type: 1, self_links: 0 });
    }

    #[test]
    fn empty_stream_yields_nothing() {
        assert_eq!(parse_postlinks(&b""[..]).count(), 0);
        assert_eq!(parse_posts(&b""[..]).count(), 0);
    }

    #[test]
    fn truncated_input_reports_an_offset() {
        let cut = &LINKS[..LINKS.find("<row Id=\"3\"").unwrap() + 8];
        let results: Vec<_> = parse_postlinks(cut.as_bytes()).collect();
        assert_eq!(results.len(), 2, "{results:?}");
        let err = results[1].as_ref().unwrap_err();
        assert!(err.offset().unwrap() > 0, "{err}");

        let unclosed = &LINKS[..LINKS.find("</postlinks>").unwrap()];
        let results: Vec<_> = parse_postlinks(unclosed.as_bytes()).collect();
        let err = results.last().unwrap().as_ref().unwrap_err();
        assert!(matches!(err, DumpError::Xml { .. }), "{err}");
    }

    #[test]
    fn mismatched_end_tag_is_an_error() {
        let bad = "<posts><row Id=\"1\" PostTypeId=\"1\" Title=\"t\" Body=\"b\" /></postlinks>";
        let results: Vec<_> = parse_posts(bad.as_bytes()).collect();
        assert!(results[0].is_ok());
        assert!(matches!(results[1], Err(DumpError::Xml { .. })));
    }

    #[test]
    fn post_rows() {
        let xml = r#"<posts>
  <row Id="1" PostTypeId="1" Score="5" Title="Sort a &lt;List&gt;" Tags="&lt;java&gt;&lt;spring&gt;" Body="&lt;p&gt;How?&lt;/p&gt;" />
  <row Id="2" PostTypeId="2" ParentId="1" Score="-1" Body="&lt;p&gt;Like this.&lt;/p&gt;" />
  <row Id="3" PostTypeId="2" ParentId="1" Score="1" />
  <row Id="4" PostTypeId="5" Body="wiki" />
  <row Id="5" PostTypeId="1" Body="no title" />
</posts>"#;
        let mut parser = parse_posts(xml.as_bytes());
        let posts: Vec<_> = parser.by_ref().collect::<Result<_, _>>().unwrap();
        assert_eq!(posts.len(), 2);
        assert_eq!(posts[0].title.as_deref(), Some("Sort a <List>"));
        assert_eq!(posts[0].tags, ["java", "spring"].map(String::from).into());
        assert_eq!(posts[0].body_html, "<p>How?</p>");
        assert_eq!(posts[1].post_type, PostType::Answer);
        assert_eq!(posts[1].parent_id, Some(1));
        assert_eq!(posts[1].score, -1);
        assert_eq!(parser.stats(), PostStats { rows: 5, yielded: 2, missing_body: 1, incomplete: 1, other_type: 1 });
    }

    #[test]
    fn bad_numbers_are_errors() {
        let xml = r#"<posts><row Id="x" PostTypeId="1" Title="t" Body="b" /></posts>"#;
        let err = parse_posts(xml.as_bytes()).next().unwrap().unwrap_err();
        assert!(matches!(err, DumpError::InvalidAttribute { attribute: "Id", .. }));
    }
}
