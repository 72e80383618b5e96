# QCIRS - Integer Ring Sieve construction of QC-LDPC codes
__version__ = "1.0.0"
