//! Seeded generators for LogHub-shaped corpora with known ground truth.
//!
//! Each generator writes raw lines in the dataset's real header format (so
//! the shipped config applies unchanged) and a `_structured.csv` with
//! `LineId, Content, EventId, EventTemplate` columns.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DATASETS: [&str; 6] = ["HDFS", "Apache", "Proxifier", "Zookeeper", "Spark", "BGL"];

/// One value generator in a synthetic event.
#[derive(Clone, Copy)]
enum Var {
    Int(u32, u32),
    Ip,
    IpPort,
    Block,
    BlockList,
    HdfsPath,
    Hex(usize),
    Pick(&'static [&'static str]),
    Float,
    Host,
    HostPort,
    Lifetime,
    User,
    Bcast,
    Rdd,
    Node,
}

struct Event {
    /// `{}` marks each variable slot.
    text: &'static str,
    vars: &'static [Var],
    weight: u32,
    /// Header piece that varies per event (component, level, program...).
    header: &'static str,
}

pub struct Corpus {
    pub name: String,
    pub lines: Vec<String>,
    /// (event id, template) per line, aligned with `lines`.
    pub truth: Vec<(String, String)>,
    /// Message content per line (what the structured CSV's Content holds).
    pub contents: Vec<String>,
}

impl Corpus {
    pub fn event_count(&self) -> usize {
        let mut ids: Vec<&str> = self.truth.iter().map(|(e, _)| e.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Writes `<dir>/<name>/<name>_2k.log` and its `_structured.csv`; returns
    /// the log path.
    pub fn write_loghub_layout(&self, dir: &Path) -> PathBuf {
        let sub = dir.join(&self.name);
        std::fs::create_dir_all(&sub).unwrap();
        let log = sub.join(format!("{}_2k.log", self.name));
        let mut body = self.lines.join("\n");
        if !body.is_empty() {
            body.push('\n');
        }
        std::fs::write(&log, body).unwrap();
        let mut w = csv::Writer::from_path(sub.join(format!("{}_2k.log_structured.csv", self.name))).unwrap();
        w.write_record(["LineId", "Content", "EventId", "EventTemplate"])
            .unwrap();
        for (i, ((e, t), c)) in self.truth.iter().zip(&self.contents).enumerate() {
            w.write_record([(i + 1).to_string().as_str(), c, e, t]).unwrap();
        }
        w.flush().unwrap();
        log
    }
}

fn render(rng: &mut ChaCha8Rng, v: Var) -> String {
    match v {
        Var::Int(lo, hi) => rng.gen_range(lo..=hi).to_string(),
        Var::Ip => format!("10.251.{}.{}", rng.gen_range(0..255), rng.gen_range(1..255)),
        Var::IpPort => format!(
            "10.250.{}.{}:{}",
            rng.gen_range(0..255),
            rng.gen_range(1..255),
            rng.gen_range(1024..60000)
        ),
        Var::Block => {
            let sign = if rng.gen_bool(0.5) { "-" } else { "" };
            format!(
                "blk_{sign}{}",
                rng.gen_range(1_000_000_000_000_000_000u64..9_000_000_000_000_000_000)
            )
        }
        Var::BlockList => {
            let n = rng.gen_range(1..=5);
            (0..n).map(|_| render(rng, Var::Block)).collect::<Vec<_>>().join(" ")
        }
        Var::HdfsPath => format!(
            "/user/root/rand{}/_temporary/_task_200811092030_0001_m_{:06}_0/part-{:05}.",
            rng.gen_range(1..9),
            rng.gen_range(0..2000),
            rng.gen_range(0..2000)
        ),
        Var::Hex(n) => (0..n).map(|_| format!("{:x}", rng.gen_range(0..16))).collect(),
        Var::Pick(options) => options.choose(rng).unwrap().to_string(),
        Var::Float => format!("{}.{}", rng.gen_range(0..400), rng.gen_range(0..10)),
        Var::Host => format!(
            "{}.{}.com",
            ["www", "api", "cdn", "mail", "img"].choose(rng).unwrap(),
            ["google", "bing", "qq", "cuhk", "sohu", "netflix"].choose(rng).unwrap()
        ),
        Var::HostPort => format!("{}:{}", render(rng, Var::Host), [80, 443, 5070].choose(rng).unwrap()),
        Var::Lifetime => {
            if rng.gen_bool(0.4) {
                format!("<{} sec", rng.gen_range(1..3))
            } else {
                format!("{:02}:{:02}", rng.gen_range(0..10), rng.gen_range(0..60))
            }
        }
        Var::User => ["yarn", "curi", "root", "hadoop", "spark"]
            .choose(rng)
            .unwrap()
            .to_string(),
        Var::Bcast => format!(
            "broadcast_{}{}",
            rng.gen_range(0..40),
            ["", "_piece0"].choose(rng).unwrap()
        ),
        Var::Rdd => format!("rdd_{}_{}", rng.gen_range(0..40), rng.gen_range(0..40)),
        Var::Node => format!(
            "R{:02}-M{}-N{}-C:J{:02}-U{:02}",
            rng.gen_range(0..80),
            rng.gen_range(0..2),
            rng.gen_range(0..16),
            rng.gen_range(2..18),
            rng.gen_range(1..12)
        ),
    }
}

fn fill(rng: &mut ChaCha8Rng, ev: &Event) -> (String, String) {
    let mut content = String::new();
    let mut template = String::new();
    let mut pieces = ev.text.split("{}");
    content.push_str(pieces.next().unwrap());
    template.push_str(ev.text.split("{}").next().unwrap());
    for (piece, var) in pieces.zip(ev.vars) {
        content.push_str(&render(rng, *var));
        content.push_str(piece);
        template.push_str("<*>");
        template.push_str(piece);
    }
    (content, template)
}

fn generate(
    name: &str,
    events: &[Event],
    n: usize,
    seed: u64,
    header: impl Fn(&mut ChaCha8Rng, usize, &Event) -> String,
) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = WeightedIndex::new(events.iter().map(|e| e.weight)).unwrap();
    let mut corpus = Corpus {
        name: name.to_string(),
        lines: Vec::with_capacity(n),
        truth: Vec::with_capacity(n),
        contents: Vec::with_capacity(n),
    };
    for i in 0..n {
        let idx = dist.sample(&mut rng);
        let ev = &events[idx];
        let (content, template) = fill(&mut rng, ev);
        let head = header(&mut rng, i, ev);
        corpus.lines.push(format!("{head}{content}"));
        corpus.truth.push((format!("E{}", idx + 1), template));
        corpus.contents.push(content);
    }
    corpus
}

pub fn corpus(name: &str, n: usize, seed: u64) -> Corpus {
    match name {
        "HDFS" => hdfs(n, seed),
        "Apache" => apache(n, seed),
        "Proxifier" => proxifier(n, seed),
        "Zookeeper" => zookeeper(n, seed),
        "Spark" => spark(n, seed),
        "BGL" => bgl(n, seed),
        other => panic!("no generator for {other}"),
    }
}

use Var::*;

const HDFS_EVENTS: &[Event] = &[
    Event {
        text: "PacketResponder {} for block {} terminating",
        vars: &[Int(0, 2), Block],
        weight: 300,
        header: "INFO dfs.DataNode$PacketResponder",
    },
    Event {
        text: "Received block {} of size {} from /{}",
        vars: &[Block, Int(1000, 67108864), Ip],
        weight: 290,
        header: "INFO dfs.DataNode$PacketResponder",
    },
    Event {
        text: "Receiving block {} src: /{} dest: /{}",
        vars: &[Block, IpPort, IpPort],
        weight: 290,
        header: "INFO dfs.DataNode$DataXceiver",
    },
    Event {
        text: "BLOCK* NameSystem.addStoredBlock: blockMap updated: {} is added to {} size {}",
        vars: &[IpPort, Block, Int(1000, 67108864)],
        weight: 310,
        header: "INFO dfs.FSNamesystem",
    },
    Event {
        text: "BLOCK* NameSystem.allocateBlock: {} {}",
        vars: &[HdfsPath, Block],
        weight: 110,
        header: "INFO dfs.FSNamesystem",
    },
    Event {
        text: "Verification succeeded for {}",
        vars: &[Block],
        weight: 60,
        header: "INFO dfs.DataBlockScanner",
    },
    Event {
        text: "{}:Served block {} to /{}",
        vars: &[IpPort, Block, Ip],
        weight: 90,
        header: "INFO dfs.DataNode",
    },
    Event {
        text: "{}:Got exception while serving {} to /{}:",
        vars: &[IpPort, Block, Ip],
        weight: 40,
        header: "WARN dfs.DataNode",
    },
    Event {
        text: "BLOCK* NameSystem.delete: {} is added to invalidSet of {}",
        vars: &[Block, IpPort],
        weight: 150,
        header: "INFO dfs.FSNamesystem",
    },
    Event {
        text: "Deleting block {} file /mnt/hadoop/dfs/data/current/subdir{}/{}",
        vars: &[Block, Int(1, 60), Block],
        weight: 140,
        header: "INFO dfs.FSDataset",
    },
    Event {
        text: "BLOCK* ask {} to delete {}",
        vars: &[IpPort, BlockList],
        weight: 30,
        header: "INFO dfs.FSNamesystem",
    },
    Event {
        text: "BLOCK* ask {} to replicate {} to datanode(s) {}",
        vars: &[IpPort, Block, IpPort],
        weight: 12,
        header: "INFO dfs.FSNamesystem",
    },
    Event {
        text: "{}:Transmitted block {} to /{}",
        vars: &[IpPort, Block, IpPort],
        weight: 12,
        header: "INFO dfs.DataNode$DataTransfer",
    },
    Event {
        text: "{} Starting thread to transfer block {} to {}",
        vars: &[IpPort, Block, IpPort],
        weight: 12,
        header: "INFO dfs.DataNode",
    },
    Event {
        text: "Received block {} src: /{} dest: /{} of size {}",
        vars: &[Block, IpPort, IpPort, Int(1000, 67108864)],
        weight: 10,
        header: "INFO dfs.DataNode$PacketResponder",
    },
    Event {
        text: "writeBlock {} received exception java.io.IOException: Could not read from stream",
        vars: &[Block],
        weight: 6,
        header: "INFO dfs.DataNode$DataXceiver",
    },
    Event {
        text: "Unexpected error trying to delete block {}. BlockInfo not found in volumeMap.",
        vars: &[Block],
        weight: 5,
        header: "WARN dfs.FSDataset",
    },
];

fn hdfs(n: usize, seed: u64) -> Corpus {
    generate("HDFS", HDFS_EVENTS, n, seed, |rng, _, ev| {
        format!(
            "081109 {:06} {} {}: ",
            203615 + rng.gen_range(0..4000),
            rng.gen_range(13..35000),
            ev.header
        )
    })
}

const APACHE_EVENTS: &[Event] = &[
    Event {
        text: "jk2_init() Found child {} in scoreboard slot {}",
        vars: &[Int(1000, 32000), Int(6, 10)],
        weight: 560,
        header: "notice",
    },
    Event {
        text: "workerEnv.init() ok {}",
        vars: &[Pick(&["/etc/httpd/conf/workers2.properties"])],
        weight: 560,
        header: "notice",
    },
    Event {
        text: "mod_jk child workerEnv in error state {}",
        vars: &[Int(6, 9)],
        weight: 530,
        header: "error",
    },
    Event {
        text: "[client {}] Directory index forbidden by rule: {}",
        vars: &[
            Ip,
            Pick(&["/var/www/html/", "/var/www/html/images/", "/var/www/html/manual/"]),
        ],
        weight: 40,
        header: "error",
    },
    Event {
        text: "jk2_init() Can't find child {} in scoreboard",
        vars: &[Int(1000, 32000)],
        weight: 30,
        header: "error",
    },
    Event {
        text: "mod_jk child init {} {}",
        vars: &[Int(1, 2), Pick(&["-2", "-4"])],
        weight: 20,
        header: "error",
    },
];

fn apache(n: usize, seed: u64) -> Corpus {
    generate("Apache", APACHE_EVENTS, n, seed, |rng, _, ev| {
        format!(
            "[Sun Dec 04 {:02}:{:02}:{:02} 2005] [{}] ",
            rng.gen_range(0..24),
            rng.gen_range(0..60),
            rng.gen_range(0..60),
            ev.header
        )
    })
}

const PROXIFIER_EVENTS: &[Event] = &[
    Event { text: "{} open through proxy proxy.cse.cuhk.edu.hk:5070 HTTPS", vars: &[HostPort], weight: 560, header: "chrome.exe" },
    Event { text: "{} close, {} bytes sent, {} bytes received, lifetime {}", vars: &[HostPort, Int(0, 1000), Int(0, 1000), Lifetime], weight: 520, header: "chrome.exe" },
    Event { text: "{} close, {} bytes ({} KB) sent, {} bytes ({} KB) received, lifetime {}", vars: &[HostPort, Int(1024, 9999), Float, Int(1024, 9999), Float, Lifetime], weight: 380, header: "chrome.exe" },
    Event { text: "{} close, {} bytes ({} KB) sent, {} bytes received, lifetime {}", vars: &[HostPort, Int(1024, 9999), Float, Int(0, 1000), Lifetime], weight: 120, header: "Dropbox.exe" },
    Event { text: "{} close, {} bytes sent, {} bytes ({} KB) received, lifetime {}", vars: &[HostPort, Int(0, 1000), Int(1024, 9999), Float, Lifetime], weight: 250, header: "chrome.exe" },
    Event { text: "{} error : Could not connect through proxy proxy.cse.cuhk.edu.hk:5070 - Proxy server cannot establish a connection with the target, status code {}", vars: &[HostPort, Pick(&["403", "404", "503"])], weight: 90, header: "chrome.exe" },
    Event { text: "{} open through proxy proxy.cse.cuhk.edu.hk:5070 SOCKS5", vars: &[HostPort], weight: 60, header: "SkypeApp.exe" },
    Event { text: "{} error : A connection request was canceled before the completion.", vars: &[HostPort], weight: 20, header: "Dropbox.exe" },
];

fn proxifier(n: usize, seed: u64) -> Corpus {
    generate("Proxifier", PROXIFIER_EVENTS, n, seed, |rng, _, ev| {
        format!(
            "[10.30 {:02}:{:02}:{:02}] {} - ",
            rng.gen_range(0..24),
            rng.gen_range(0..60),
            rng.gen_range(0..60),
            ev.header
        )
    })
}

const ZOOKEEPER_EVENTS: &[Event] = &[
    Event {
        text: "Notification time out: {}",
        vars: &[Int(200, 60000)],
        weight: 120,
        header: "INFO  [QuorumPeer[myid=1]/0:0:0:0:0:0:0:0:2181:FastLeaderElection@774]",
    },
    Event {
        text: "Received connection request /{}",
        vars: &[IpPort],
        weight: 110,
        header: "INFO  [/10.10.34.11:3888:QuorumCnxManager$Listener@493]",
    },
    Event {
        text: "Connection broken for id {}, my id = {}, error =",
        vars: &[Int(1, 3), Int(1, 3)],
        weight: 80,
        header: "WARN  [RecvWorker:188978561024:QuorumCnxManager$RecvWorker@765]",
    },
    Event {
        text: "Interrupted while waiting for message on queue",
        vars: &[],
        weight: 80,
        header: "WARN  [SendWorker:188978561024:QuorumCnxManager$SendWorker@679]",
    },
    Event {
        text: "Send worker leaving thread",
        vars: &[],
        weight: 80,
        header: "WARN  [SendWorker:188978561024:QuorumCnxManager$SendWorker@688]",
    },
    Event {
        text: "Cannot open channel to {} at election address /{}",
        vars: &[Int(1, 3), IpPort],
        weight: 90,
        header: "WARN  [WorkerSender[myid=1]:QuorumCnxManager@368]",
    },
    Event {
        text: "Accepted socket connection from /{}",
        vars: &[IpPort],
        weight: 300,
        header: "INFO  [NIOServerCxn.Factory:0.0.0.0/0.0.0.0:2181:NIOServerCnxnFactory@197]",
    },
    Event {
        text: "Client attempting to establish new session at /{}",
        vars: &[IpPort],
        weight: 160,
        header: "INFO  [NIOServerCxn.Factory:0.0.0.0/0.0.0.0:2181:ZooKeeperServer@839]",
    },
    Event {
        text: "Established session 0x{} with negotiated timeout {} for client /{}",
        vars: &[Hex(14), Int(10000, 40000), IpPort],
        weight: 160,
        header: "INFO  [CommitProcessor:1:ZooKeeperServer@595]",
    },
    Event {
        text: "Closed socket connection for client /{} which had sessionid 0x{}",
        vars: &[IpPort, Hex(14)],
        weight: 250,
        header: "INFO  [NIOServerCxn.Factory:0.0.0.0/0.0.0.0:2181:NIOServerCnxn@1001]",
    },
    Event {
        text: "Closed socket connection for client /{} (no session established for client)",
        vars: &[IpPort],
        weight: 60,
        header: "INFO  [NIOServerCxn.Factory:0.0.0.0/0.0.0.0:2181:NIOServerCnxn@1001]",
    },
    Event {
        text: "caught end of stream exception",
        vars: &[],
        weight: 120,
        header: "WARN  [NIOServerCxn.Factory:0.0.0.0/0.0.0.0:2181:NIOServerCnxn@349]",
    },
    Event {
        text: "Expiring session 0x{}, timeout of {}ms exceeded",
        vars: &[Hex(14), Int(10000, 40000)],
        weight: 80,
        header: "INFO  [SessionTracker:ZooKeeperServer@325]",
    },
    Event {
        text: "Processed session termination for sessionid: 0x{}",
        vars: &[Hex(14)],
        weight: 80,
        header: "INFO  [ProcessThread(sid:3 cport:-1)::PrepRequestProcessor@476]",
    },
    Event {
        text: "Connection request from old client /{}; will be dropped if server is in r-o mode",
        vars: &[IpPort],
        weight: 30,
        header: "INFO  [NIOServerCxn.Factory:0.0.0.0/0.0.0.0:2181:ZooKeeperServer@793]",
    },
];

fn zookeeper(n: usize, seed: u64) -> Corpus {
    generate("Zookeeper", ZOOKEEPER_EVENTS, n, seed, |rng, _, ev| {
        format!(
            "2015-07-29 {:02}:{:02}:{:02},{:03} - {} - ",
            rng.gen_range(0..24),
            rng.gen_range(0..60),
            rng.gen_range(0..60),
            rng.gen_range(0..1000),
            ev.header
        )
    })
}

const SPARK_EVENTS: &[Event] = &[
    Event { text: "Registered signal handlers for [TERM, HUP, INT]", vars: &[], weight: 20, header: "INFO executor.CoarseGrainedExecutorBackend" },
    Event { text: "Changing view acls to: {}", vars: &[User], weight: 20, header: "INFO spark.SecurityManager" },
    Event { text: "Changing modify acls to: {}", vars: &[User], weight: 20, header: "INFO spark.SecurityManager" },
    Event { text: "SecurityManager: authentication disabled; ui acls disabled; users with view permissions: Set({}); users with modify permissions: Set({})", vars: &[User, User], weight: 20, header: "INFO spark.SecurityManager" },
    Event { text: "Slf4jLogger started", vars: &[], weight: 20, header: "INFO slf4j.Slf4jLogger" },
    Event { text: "Started reading broadcast variable {}", vars: &[Int(0, 40)], weight: 120, header: "INFO broadcast.TorrentBroadcast" },
    Event { text: "Block {} stored as bytes in memory (estimated size {} KB, free {} KB)", vars: &[Bcast, Float, Float], weight: 120, header: "INFO storage.MemoryStore" },
    Event { text: "Reading broadcast variable {} took {} ms", vars: &[Int(0, 40), Int(1, 900)], weight: 120, header: "INFO broadcast.TorrentBroadcast" },
    Event { text: "Block {} stored as values in memory (estimated size {} KB, free {} KB)", vars: &[Bcast, Float, Float], weight: 120, header: "INFO storage.MemoryStore" },
    Event { text: "Found block {} locally", vars: &[Rdd], weight: 250, header: "INFO storage.BlockManager" },
    Event { text: "Running task {} in stage {} (TID {})", vars: &[Float, Float, Int(0, 5000)], weight: 300, header: "INFO executor.Executor" },
    Event { text: "Finished task {} in stage {} (TID {}). {} bytes result sent to driver", vars: &[Float, Float, Int(0, 5000), Int(900, 3000)], weight: 300, header: "INFO executor.Executor" },
    Event { text: "Got assigned task {}", vars: &[Int(0, 5000)], weight: 300, header: "INFO executor.CoarseGrainedExecutorBackend" },
    Event { text: "Input split: hdfs://10.10.34.11:8020/pjhe/test/{}/part-{}:{}+{}", vars: &[Int(1, 9), Int(10000, 99999), Int(0, 99999), Int(1000, 99999)], weight: 150, header: "INFO rdd.HadoopRDD" },
    Event { text: "Partition {} not found, computing it", vars: &[Rdd], weight: 100, header: "INFO spark.CacheManager" },
    Event { text: "Told to re-register on heartbeat", vars: &[], weight: 10, header: "INFO storage.BlockManager" },
];

fn spark(n: usize, seed: u64) -> Corpus {
    generate("Spark", SPARK_EVENTS, n, seed, |rng, _, ev| {
        format!(
            "17/06/09 {:02}:{:02}:{:02} {}: ",
            rng.gen_range(0..24),
            rng.gen_range(0..60),
            rng.gen_range(0..60),
            ev.header
        )
    })
}

const BGL_EVENTS: &[Event] = &[
    Event {
        text: "instruction cache parity error corrected",
        vars: &[],
        weight: 300,
        header: "RAS KERNEL INFO",
    },
    Event {
        text: "generating {}",
        vars: &[Pick(&["core.1024", "core.2275", "core.862", "core.12"])],
        weight: 250,
        header: "RAS KERNEL INFO",
    },
    Event {
        text: "{} double-hummer alignment exceptions",
        vars: &[Int(1, 9999)],
        weight: 150,
        header: "RAS KERNEL INFO",
    },
    Event {
        text: "CE sym {}, at 0x{}, mask 0x{}",
        vars: &[Int(0, 40), Hex(8), Hex(2)],
        weight: 150,
        header: "RAS KERNEL INFO",
    },
    Event {
        text: "data TLB error interrupt",
        vars: &[],
        weight: 120,
        header: "RAS KERNEL FATAL",
    },
    Event {
        text: "total of {} ddr error(s) detected and corrected",
        vars: &[Int(1, 40)],
        weight: 120,
        header: "RAS KERNEL INFO",
    },
    Event {
        text: "ddr: excessive soft failures, consider replacing the card",
        vars: &[],
        weight: 40,
        header: "RAS KERNEL FATAL",
    },
    Event {
        text: "rts: kernel terminated for reason {}",
        vars: &[Int(1001, 1004)],
        weight: 60,
        header: "RAS KERNEL FATAL",
    },
    Event {
        text: "machine check interrupt (bit=0x{}): L2 dcache unit data parity error",
        vars: &[Hex(2)],
        weight: 40,
        header: "RAS KERNEL FATAL",
    },
    Event {
        text: "{} L3 EDRAM error(s) (dcr 0x0157) detected and corrected",
        vars: &[Int(1, 12)],
        weight: 80,
        header: "RAS KERNEL INFO",
    },
    Event {
        text: "Lustre mount FAILED : {} : block_id : location",
        vars: &[Node],
        weight: 60,
        header: "RAS APP FATAL",
    },
    Event {
        text: "ciod: LOGIN chdir(/p/gb1/stella/RAPTOR/{}/tmp) failed: No such file or directory",
        vars: &[Int(2000, 2300)],
        weight: 60,
        header: "RAS APP FATAL",
    },
    Event {
        text: "ciod: Error reading message prefix after LOGIN_MESSAGE on CioStream socket to {}: Link has been severed",
        vars: &[IpPort],
        weight: 60,
        header: "RAS APP FATAL",
    },
    Event {
        text: "ciod: failed to read message prefix on control stream (CioStream socket to {}",
        vars: &[IpPort],
        weight: 60,
        header: "RAS APP FATAL",
    },
];

fn bgl(n: usize, seed: u64) -> Corpus {
    generate("BGL", BGL_EVENTS, n, seed, |rng, i, ev| {
        let node = render(rng, Node);
        format!(
            "- {} 2005.06.03 {node} 2005-06-03-15.42.{:02}.{:06} {node} {} ",
            1117838570 + i,
            rng.gen_range(0..60),
            rng.gen_range(0..1_000_000),
            ev.header
        )
    })
}

/// The shipped example config, resolved against `dir`.
pub fn shipped_config(dir: &Path) -> Vec<logsieve::Config> {
    let text =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/loghub_2k.toml")).unwrap();
    logsieve::parse_config(&text, dir).unwrap()
}
