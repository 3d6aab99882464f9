# Test suite for the twisted-flows lab
