//! A minimal in-process HTTP server for exercising the scorer wire protocol
//! in tests, examples and benches.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

type Handler = dyn Fn(&str, &str) -> (u16, String) + Send + Sync;

/// Serves each request with a handler `(path, body) -> (status, json body)`.
/// One request per connection; the server stops when dropped.
pub struct StubServer {
    addr: std::net::SocketAddr,
    stop: Arc<AtomicBool>,
    requests: Arc<AtomicUsize>,
    thread: Option<JoinHandle<()>>,
}

impl StubServer {
    pub fn new(handler: impl Fn(&str, &str) -> (u16, String) + Send + Sync + 'static) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub listener");
        let addr = listener.local_addr().expect("stub address");
        let stop = Arc::new(AtomicBool::new(false));
        let requests = Arc::new(AtomicUsize::new(0));
        let handler: Arc<Handler> = Arc::new(handler);
        let thread = {
            let stop = Arc::clone(&stop);
            let requests = Arc::clone(&requests);
            std::thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let handler = Arc::clone(&handler);
                    let requests = Arc::clone(&requests);
                    std::thread::spawn(move || {
                        let _ = serve(stream, &*handler, &requests);
                    });
                }
            })
        };
        Self { addr, stop, requests, thread: Some(thread) }
    }

    /// A well-behaved service: every score is `score`; the i-th vector of a
    /// request is the basis vector `e_(i mod dim)`.
    pub fn echo(score: f64, dim: usize) -> Self {
        Self::new(move |path, body| {
            let request: serde_json::Value = match serde_json::from_str(body) {
                Ok(v) => v,
                Err(_) if path == "/health" => serde_json::Value::Null,
                Err(_) => return (400, r#"{"error": "malformed JSON"}"#.into()),
            };
            let count = request["sentences"].as_array().map_or(0, Vec::len);
            match path {
                "/score" => (200, serde_json::json!({ "scores": vec![score; count] }).to_string()),
                "/embed" => {
                    let vectors: Vec<Vec<f64>> =
                        (0..count).map(|i| (0..dim).map(|d| if d == i % dim { 1.0 } else { 0.0 }).collect()).collect();
                    (200, serde_json::json!({ "vectors": vectors }).to_string())
                }
                "/health" => (200, serde_json::json!({ "status": "ok", "embed_dim": dim }).to_string()),
                _ => (404, r#"{"error": "not found"}"#.into()),
            }
        })
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Number of requests served so far.
    pub fn requests(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        let _ = TcpStream::connect(self.addr);
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

fn serve(stream: TcpStream, handler: &Handler, requests: &AtomicUsize) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    if reader.read_line(&mut request_line)? == 0 {
        return Ok(());
    }
    let path = request_line.split_whitespace().nth(1).unwrap_or("/").to_string();
    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 || line == "\r\n" || line == "\n" {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            if name.trim().eq_ignore_ascii_case("content-length") {
                content_length = value.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body)?;
    requests.fetch_add(1, Ordering::SeqCst);
    let (status, payload) = handler(&path, &String::from_utf8_lossy(&body));
    let mut stream = stream;
    write!(
        stream,
        "HTTP/1.1 {status} {}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{payload}",
        if status < 400 { "OK" } else { "Error" },
        payload.len()
    )?;
    stream.flush()
}
