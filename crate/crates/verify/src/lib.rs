//! Host crate for the `acceptance` test target, which exercises the core
//! library and the `framedist` binary together. It has no API of its own.
