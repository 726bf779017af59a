//! Start the session server in-process and play a human game over HTTP.
//!
//! `cargo run --example service_client`

use std::sync::Arc;

use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::TcpStream;

use pursuit::service::{router, SessionManager};

async fn request(addr: std::net::SocketAddr, method: &str, path: &str, body: &str) -> String {
    let mut s = TcpStream::connect(addr).await.unwrap();
    let req = format!(
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    s.write_all(req.as_bytes()).await.unwrap();
    let mut out = String::new();
    s.read_to_string(&mut out).await.unwrap();
    let (head, body) = out.split_once("\r\n\r\n").unwrap_or((&out, ""));
    format!("{} {}", head.lines().next().unwrap_or(""), body)
}

#[tokio::main]
async fn main() {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(
        async move { axum::serve(listener, router(Arc::new(SessionManager::new()))).await },
    );

    let created = request(addr, "POST", "/sessions", r#"{"env": "env1", "seed": 1}"#).await;
    println!("{created}");
    let id = 1;
    let path = format!("/sessions/{id}/evader-move");
    println!(
        "{}",
        request(addr, "POST", &path, r#"{"x": 5, "y": 5}"#).await
    );
    println!(
        "{}",
        request(addr, "POST", &path, r#"{"x": 9.5, "y": 9.5}"#).await
    );
    let mut y = 9.5f64;
    for _ in 0..40 {
        y = (y - 0.8).max(0.5);
        let r = request(addr, "POST", &path, &format!(r#"{{"x": 9.5, "y": {y}}}"#)).await;
        let status = r
            .split("\"status\":\"")
            .nth(1)
            .and_then(|s| s.split('"').next())
            .unwrap_or("?")
            .to_string();
        println!("move to (9.5, {y:.1}): {status}");
        if status != "running" {
            break;
        }
    }
    let trace = request(addr, "GET", &format!("/sessions/{id}/trace"), "").await;
    println!("trace: {} lines", trace.lines().count());
}
