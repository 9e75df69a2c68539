from BibundleApp import documents
from BibundleApp.bibundle import pair
from BibundleApp.management.base import DocumentCommand


class Command(DocumentCommand):
    help = 'Pair bibundles K -> H and K -> G into a bibundle K -> H x G'
    output_name = 'pair'

    def add_arguments(self, parser):
        parser.add_argument('first', help='Bibundle K -> H')
        parser.add_argument('second', help='Bibundle K -> G')
        self.add_output_arguments(parser)

    def run(self, **options):
        P1 = self.load(options['first'], documents.BIBUNDLE)
        P2 = self.load(options['second'], documents.BIBUNDLE)
        self.emit(pair(P1, P2), options)
