# Sweep module tests
