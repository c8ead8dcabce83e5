// Sketches are linear: two sketches of stream halves merge into the
// sketch of the whole stream, and the state round-trips through bytes.
//
// cargo run --example merge_and_serialize

use std::error::Error;

use densketch::sketch::{codec, LeveledSampler, SamplerConfig};
use densketch::stream::{generate_stream, StreamSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let stream = generate_stream(
        &StreamSpec::Churn {
            n: 80,
            events: 6_000,
            live: 300,
        },
        17,
    )?;
    let config = SamplerConfig::new(stream.n, 40, 123);
    let (head, tail) = stream.events.split_at(stream.events.len() / 3);

    let mut whole = LeveledSampler::new(config.clone())?;
    whole.update_batch(&stream.events)?;
    let mut left = LeveledSampler::new(config.clone())?;
    left.update_batch(head)?;
    let mut right = LeveledSampler::new(config)?;
    right.update_batch(tail)?;
    // The tail alone deletes edges inserted in the head, so its counters
    // go negative; only the sum is a valid strict-turnstile state.
    let merged = LeveledSampler::merged(&left, &right)?;
    assert!(merged == whole);
    assert_eq!(merged.query()?, whole.query()?);
    println!(
        "merge of {} + {} events equals the full sketch",
        head.len(),
        tail.len()
    );

    let bytes = codec::encode(&merged);
    let restored = codec::decode(&bytes)?;
    assert!(restored == merged);
    println!(
        "encoded state: {} bytes, decodes to an identical sketch",
        bytes.len()
    );
    println!(
        "query after restore: {} edges, p = {}",
        restored.query()?.sample.len(),
        restored.query()?.p
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
