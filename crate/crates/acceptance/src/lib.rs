// The acceptance criteria live in tests/acceptance.rs.
