"""Design and audit of QC-LDPC codes free of targeted leafless elementary trapping sets."""
