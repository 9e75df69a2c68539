from BibundleApp import documents
from BibundleApp.bibundle import compose
from BibundleApp.management.base import DocumentCommand


class Command(DocumentCommand):
    help = 'Compose bibundles H -> G and G -> K into a bibundle H -> K'
    output_name = 'composite'

    def add_arguments(self, parser):
        parser.add_argument('first', help='Bibundle H -> G')
        parser.add_argument('second', help='Bibundle G -> K')
        self.add_output_arguments(parser)

    def run(self, **options):
        P = self.load(options['first'], documents.BIBUNDLE)
        Q = self.load(options['second'], documents.BIBUNDLE)
        self.emit(compose(P, Q), options)
