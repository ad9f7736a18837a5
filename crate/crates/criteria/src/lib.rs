//! Holds the `acceptance` test target, which checks every acceptance criterion
//! against `wrt-core` and prints one PASS/FAIL line per criterion.
