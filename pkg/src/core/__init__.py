# Continued Fraction and Counting Engines
