import os

# single-threaded BLAS: the matrices here are small and trajectory-level
# process parallelism is used instead
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")
os.environ.setdefault("MKL_NUM_THREADS", "1")
