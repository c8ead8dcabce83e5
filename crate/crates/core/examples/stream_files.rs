// Generators, the text stream format and strict-turnstile validation.
//
// cargo run --example stream_files

use std::error::Error;
use std::io::Cursor;

use densketch::stream::{
    generate_stream, parse_stream, serialize_stream, validate_strict_turnstile, Stream, StreamSpec,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec: StreamSpec = "churn:n=30,events=200,live=40".parse()?;
    let generated = generate_stream(&spec, 8)?;
    let stream = Stream {
        n: generated.n,
        directed: generated.directed,
        events: generated.events.clone(),
    };
    let text = serialize_stream(&stream);
    println!(
        "{spec}: {} events, {} live at the end",
        stream.events.len(),
        generated.graph.edge_count()
    );
    for line in text.lines().take(4) {
        println!("  {line}");
    }

    let parsed = parse_stream(Cursor::new(text.as_bytes()))?;
    assert_eq!(parsed, stream);
    validate_strict_turnstile(&parsed.events, parsed.directed)?;
    println!("round trip and validation ok");

    let broken = "n 4\n+ 0 1\n+ 2 3\n- 1 2\n";
    let parsed = parse_stream(Cursor::new(broken))?;
    match validate_strict_turnstile(&parsed.events, parsed.directed) {
        Err(v) => println!("rejected: {v}"),
        Ok(()) => unreachable!("the third event deletes an absent edge"),
    }
    match parse_stream(Cursor::new("n 3\n+ 0 5\n")) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("vertex 5 is out of range"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
