from qcorr.cli import run

run()
