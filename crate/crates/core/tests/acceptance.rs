//! One line per acceptance criterion. A criterion listed in
//! `KNOWN_FAILURES` is expected to fail with the recorded analysis; if it
//! starts passing the list is stale and this target fails.

use jumploci_core::selftest::criteria;

/// Criteria whose check is implemented faithfully but does not hold.
const KNOWN_FAILURES: &[u32] = &[7];

#[test]
fn acceptance() {
    let mut unexpected = Vec::new();
    for c in criteria() {
        let outcome = c.run();
        println!("{}", outcome.line());
        if outcome.passed == KNOWN_FAILURES.contains(&outcome.id) {
            unexpected.push(outcome.id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {:?}", unexpected);
}
