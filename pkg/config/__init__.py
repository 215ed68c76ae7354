# ECFCensus Configuration
