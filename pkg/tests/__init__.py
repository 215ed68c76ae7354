# ECFCensus Test Suite
