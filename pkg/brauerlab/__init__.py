# brauerlab: symbol algebras and Pfister forms over iterated Laurent series fields
__version__ = "0.1.0"
