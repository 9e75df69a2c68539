from collections import Counter

from BibundleApp import documents
from BibundleApp.management.base import DocumentCommand
from BibundleApp.morita import morita_equivalent


def _class_line(entry):
    orders = ', '.join(f'{count} of order {order}' for order, count in entry['element_orders'])
    return f'order {entry["order"]} ({orders})'


class Command(DocumentCommand):
    help = 'Decide whether two groupoids are Morita equivalent'
    output_name = 'morita-certificate'

    def add_arguments(self, parser):
        parser.add_argument('first', help='Groupoid document')
        parser.add_argument('second', help='Groupoid document')
        self.add_format_argument(parser)
        self.add_output_arguments(parser)

    def run(self, **options):
        H = self.load(options['first'], documents.GROUPOID)
        G = self.load(options['second'], documents.GROUPOID)
        certificate = morita_equivalent(H, G)
        data = {'verdict': 'equivalent' if certificate.equivalent else 'inequivalent'}
        if certificate.equivalent:
            data['bibundle_carrier'] = certificate.bibundle.carrier.size
            data['inverse_carrier'] = certificate.inverse.carrier.size
            lines = [
                self.style.SUCCESS('equivalent'),
                f'  bibundle carrier {data["bibundle_carrier"]}, '
                f'inverse carrier {data["inverse_carrier"]}',
            ]
        else:
            inv_h, inv_g = certificate.refutation
            first, second = inv_h.describe(), inv_g.describe()
            data['first'], data['second'] = first, second
            lines = [self.style.WARNING('inequivalent')]
            only_first = Counter(inv_h.signature()) - Counter(inv_g.signature())
            only_second = Counter(inv_g.signature()) - Counter(inv_h.signature())
            sides = (('first', inv_h, first, only_first), ('second', inv_g, second, only_second))
            for label, invariant, entries, only in sides:
                lines.append(f'  {label}: {len(entries)} component(s)')
                for c, entry in zip(invariant.classes, entries):
                    key = (c.order, c.order_profile)
                    # unmatched classes are marked with a dash
                    marker = '-' if only[key] > 0 else ' '
                    only[key] -= 1
                    lines.append(f'  {marker} {_class_line(entry)}')
        self.report(data, lines, options)
        if certificate.equivalent and options.get('output'):
            self.emit(certificate.bibundle, options)
