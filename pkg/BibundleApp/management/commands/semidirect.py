from BibundleApp import documents
from BibundleApp.management.base import DocumentCommand
from BibundleApp.morita import semidirect_product


class Command(DocumentCommand):
    help = 'Form the semidirect product of a groupoid internal to G-actions'
    output_name = 'semidirect'

    def add_arguments(self, parser):
        parser.add_argument('internal_groupoid', help='Internal groupoid document')
        self.add_output_arguments(parser)

    def run(self, **options):
        K = self.load(options['internal_groupoid'], documents.INTERNAL_GROUPOID)
        self.emit(semidirect_product(K), options)
