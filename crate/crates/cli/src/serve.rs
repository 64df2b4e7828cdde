//! HTTP front for the JSON API. One thread per request, so long meshing jobs never block
//! `/api/health`.

use std::fs;
use std::io::Read;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;
use std::thread;

use log::{info, warn};
use morphocell::api;
use tiny_http::{Header, Request, Response, Server};

/// Larger request bodies are refused with 413.
const MAX_BODY: u64 = 1 << 20;

pub fn run(host: &str, port: u16, static_dir: Option<PathBuf>) -> Result<(), String> {
    let server = Server::http((host, port)).map_err(|e| format!("cannot bind {host}:{port}: {e}"))?;
    // the bound port, so tests may pass 0
    let addr = server.server_addr();
    println!("listening on http://{addr}");
    let static_dir = Arc::new(static_dir);
    for request in server.incoming_requests() {
        let static_dir = Arc::clone(&static_dir);
        thread::spawn(move || respond(request, static_dir.as_deref()));
    }
    Ok(())
}

fn header(name: &str, value: &str) -> Header {
    Header::from_bytes(name.as_bytes(), value.as_bytes()).expect("static header is valid")
}

fn respond(mut request: Request, static_dir: Option<&Path>) {
    let method = request.method().as_str().to_string();
    let url = request.url().to_string();
    let mut body = Vec::new();
    let too_large = request.body_length().is_some_and(|n| n as u64 > MAX_BODY);
    let read = if too_large {
        Ok(0)
    } else {
        request.as_reader().take(MAX_BODY + 1).read_to_end(&mut body)
    };

    let (status, content_type, bytes) = if too_large || body.len() as u64 > MAX_BODY {
        (413, "application/json", br#"{"error":{"code":"BODY_TOO_LARGE","message":"request body exceeds 1 MiB"}}"#.to_vec())
    } else if let Err(e) = read {
        warn!("{method} {url}: reading body failed: {e}");
        return;
    } else {
        match static_dir {
            Some(dir) if !url.starts_with("/api/") => static_file(dir, &method, &url),
            _ => {
                let r = api::handle(&method, &url, &body);
                (r.status, r.content_type, r.body)
            }
        }
    };
    info!("{method} {url} -> {status}");
    let response = Response::from_data(bytes)
        .with_status_code(status)
        // bodies are fully buffered, so always send Content-Length
        .with_chunked_threshold(usize::MAX)
        .with_header(header("Content-Type", content_type));
    if let Err(e) = request.respond(response) {
        warn!("{method} {url}: sending response failed: {e}");
    }
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        _ => "application/octet-stream",
    }
}

fn static_file(root: &Path, method: &str, url: &str) -> (u16, &'static str, Vec<u8>) {
    if method != "GET" {
        return (405, "text/plain", b"method not allowed\n".to_vec());
    }
    let rel = url.split(['?', '#']).next().unwrap_or_default().trim_start_matches('/');
    let rel = Path::new(if rel.is_empty() { "index.html" } else { rel });
    // only plain names below the root
    if !rel.components().all(|c| matches!(c, Component::Normal(_))) {
        return (404, "text/plain", b"not found\n".to_vec());
    }
    let path = root.join(rel);
    match fs::read(&path) {
        Ok(bytes) => (200, content_type(&path), bytes),
        Err(_) => (404, "text/plain", b"not found\n".to_vec()),
    }
}
