# ECFCensus Source Code
