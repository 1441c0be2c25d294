//! Serve a bundle over HTTP and issue a few requests against it.

use std::io::{Read, Write};
use std::net::TcpStream;

use pdbundle::{fixtures, PDBundle};

fn get(addr: std::net::SocketAddr, path: &str) -> std::io::Result<String> {
    let mut s = TcpStream::connect(addr)?;
    write!(s, "GET {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n")?;
    let mut out = String::new();
    s.read_to_string(&mut out)?;
    Ok(out.lines().next().unwrap_or("").to_string() + "  " + out.rsplit("\r\n\r\n").next().unwrap_or(""))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bundle = PDBundle::build(fixtures::ff1())?;
    let rt = tokio::runtime::Runtime::new()?;
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))?;
    let addr = listener.local_addr()?;
    rt.spawn(pdbundle::service::serve_on(bundle, listener));

    for path in ["/meta", "/diagram?x=0&y=0&q=0", "/diagram?x=5&y=5&q=0", "/diagram?x=zero&y=0&q=0"] {
        println!("GET {path}\n  {}", get(addr, path)?);
    }
    Ok(())
}
