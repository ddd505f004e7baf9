# dynkin-walk Package
__version__ = "0.1.0"
__description__ = "Walk matrices, Smith normal forms and main eigenvalues of Dynkin graphs"
__license__ = "MIT"
