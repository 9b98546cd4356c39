namespace eclink {

// Trimmed public-suffix snapshot bundled for reproducible runs. Covers the
// TLDs this tooling meets in practice plus the wildcard/exception rule forms.
// Swap in a full list at runtime with --suffix-list when broader coverage is
// needed; the snapshot version is echoed into every artifact.
extern const char* const kBundledSuffixSnapshot;
const char* const kBundledSuffixSnapshot = R"PSL(// eclink public suffix snapshot
// version: 20260115.1
// generic
com
net
org
info
biz
name
pro
app
dev
io
me
cc
tv
la
asia
mobi
// new gTLDs common in fake-EC infrastructure
xyz
top
shop
online
site
store
icu
cyou
club
vip
work
live
fun
lol
sbs
cfd
bond
// country code
jp
co.jp
ne.jp
or.jp
ac.jp
go.jp
ad.jp
uk
co.uk
org.uk
ac.uk
gov.uk
cn
com.cn
net.cn
org.cn
ke
co.ke
or.ke
ne.ke
go.ke
us
de
fr
nl
ru
in
kr
co.kr
tw
com.tw
hk
com.hk
br
com.br
au
com.au
// wildcard and exception rule forms
*.ck
!www.ck
)PSL";

}  // namespace eclink
